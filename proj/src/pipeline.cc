// Copyright 2026 The AeroEmit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aeroemit/pipeline.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "aeroemit/csv.h"
#include "aeroemit/errors.h"

namespace aeroemit::pipeline {
namespace {

using matching::IncomputableCause;
using matching::Provenance;

double parse_number(std::string_view key, std::string_view value) {
  auto v = csv::parse_double(value);
  if (!v) throw InputError(fmt::format("config: '{}' must be a number, got '{}'", key, value));
  return *v;
}

double parse_positive(std::string_view key, std::string_view value) {
  const double v = parse_number(key, value);
  if (!(v > 0.0)) throw InputError(fmt::format("config: '{}' must be > 0, got '{}'", key, value));
  return v;
}

std::string_view cause_key(IncomputableCause cause) { return matching::cause_name(cause); }

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot create output file '{}'", path.string()));
  body(out);
  out.flush();
  if (!out) throw InputError(fmt::format("failed writing output file '{}'", path.string()));
}

void write_flight_identity(std::vector<std::string>& fields,
                           const ingest::FlightRecord& f) {
  fields.push_back(ingest::format_date(f.flight_date));
  fields.push_back(f.carrier_code);
  fields.push_back(f.flight_number);
  fields.push_back(f.tail_number.value_or(""));
  fields.push_back(f.origin);
  fields.push_back(f.destination);
  fields.push_back(csv::format_exact(f.distance_mi));
  fields.push_back(f.air_time_min ? csv::format_exact(*f.air_time_min) : "");
}

}  // namespace

RunConfig RunConfig::parse(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  std::map<std::string, std::string, std::less<>> values;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view trimmed = csv::trim(line);
    if (trimmed.empty() || trimmed == "\r") continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw InputError(fmt::format("config line {}: expected 'key = value'", line_no));
    }
    std::string key(csv::trim(trimmed.substr(0, eq)));
    std::string value(csv::trim(trimmed.substr(eq + 1)));
    if (!value.empty() && value.back() == '\r') value.pop_back();
    if (!values.emplace(key, value).second) {
      throw InputError(fmt::format("config line {}: duplicate key '{}'", line_no, key));
    }
  }

  auto take = [&](std::string_view key) -> std::optional<std::string> {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    std::string v = it->second;
    values.erase(it);
    if (v.empty()) return std::nullopt;
    return v;
  };
  auto path_of = [&](std::string_view key, bool required) -> std::optional<std::filesystem::path> {
    auto v = take(key);
    if (!v) {
      if (required) throw InputError(fmt::format("config: missing required key '{}'", key));
      return std::nullopt;
    }
    std::filesystem::path p(*v);
    return p.is_absolute() ? p : base_dir / p;
  };

  cfg.ontime = *path_of("ontime", true);
  cfg.b43 = *path_of("b43", true);
  cfg.tail_registry = *path_of("tail_registry", true);
  cfg.engine_codes = *path_of("engine_codes", true);
  cfg.icao_engines = *path_of("icao_engines", true);
  cfg.bada_ccd = *path_of("bada_ccd", true);
  cfg.normalization_rules = *path_of("normalization_rules", true);
  cfg.family_fallback = *path_of("family_fallback", true);
  cfg.popular_engine_override = path_of("popular_engine_override", false);
  cfg.output_dir = path_of("output_dir", false).value_or(base_dir / "out");

  if (auto v = take("co2e_factor_co2")) cfg.co2e_factors.co2 = parse_positive("co2e_factor_co2", *v);
  if (auto v = take("co2e_factor_co")) cfg.co2e_factors.co = parse_positive("co2e_factor_co", *v);
  if (auto v = take("co2e_factor_hc")) cfg.co2e_factors.hc = parse_positive("co2e_factor_hc", *v);
  if (auto v = take("co2e_factor_nox")) cfg.co2e_factors.nox = parse_positive("co2e_factor_nox", *v);
  if (auto v = take("jaccard_threshold")) {
    cfg.jaccard_threshold = parse_number("jaccard_threshold", *v);
    if (cfg.jaccard_threshold < 0.0 || cfg.jaccard_threshold > 1.0) {
      throw InputError(fmt::format("config: jaccard_threshold must be in [0, 1], got '{}'", *v));
    }
  }
  if (auto v = take("engine_multiplier")) {
    if (*v == "aircraft") {
      cfg.engine_multiplier = emissions::EngineMultiplierMode::kAircraftLevel;
    } else if (*v == "per-engine") {
      cfg.engine_multiplier = emissions::EngineMultiplierMode::kPerEngine;
    } else {
      throw InputError(fmt::format(
          "config: engine_multiplier must be 'aircraft' or 'per-engine', got '{}'", *v));
    }
  }
  if (auto v = take("interpolation_key")) {
    if (*v == "time") {
      cfg.interpolation_key = emissions::CcdKey::kDuration;
    } else if (*v == "distance") {
      cfg.interpolation_key = emissions::CcdKey::kDistance;
    } else {
      throw InputError(fmt::format(
          "config: interpolation_key must be 'time' or 'distance', got '{}'", *v));
    }
  }
  auto unep_short = take("unep_short_haul_co2_per_seat_mile");
  auto unep_long = take("unep_long_haul_co2_per_seat_mile");
  auto unep_cutoff = take("unep_cutoff_mi");
  const int unep_given = !!unep_short + !!unep_long + !!unep_cutoff;
  if (unep_given == 3) {
    cfg.unep = aggregation::UnepConfig{
        parse_positive("unep_short_haul_co2_per_seat_mile", *unep_short),
        parse_positive("unep_long_haul_co2_per_seat_mile", *unep_long),
        parse_positive("unep_cutoff_mi", *unep_cutoff)};
  } else if (unep_given != 0) {
    throw InputError(
        "config: the UNEP baseline needs unep_short_haul_co2_per_seat_mile, "
        "unep_long_haul_co2_per_seat_mile and unep_cutoff_mi together");
  }
  if (auto v = take("threads")) {
    auto n = csv::parse_int(*v);
    if (!n || *n < 1 || *n > 1024) {
      throw InputError(fmt::format("config: threads must be 1-1024, got '{}'", *v));
    }
    cfg.threads = static_cast<unsigned>(*n);
  }
  if (!values.empty()) {
    throw InputError(fmt::format("config: unknown key '{}'", values.begin()->first));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse(text.str(), path.parent_path());
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void RunConfig::check_paths() const {
  const std::pair<std::string_view, const std::filesystem::path*> inputs[] = {
      {"ontime", &ontime},
      {"b43", &b43},
      {"tail_registry", &tail_registry},
      {"engine_codes", &engine_codes},
      {"icao_engines", &icao_engines},
      {"bada_ccd", &bada_ccd},
      {"normalization_rules", &normalization_rules},
      {"family_fallback", &family_fallback},
  };
  for (const auto& [key, path] : inputs) {
    if (!std::filesystem::is_regular_file(*path)) {
      throw InputError(fmt::format("{}: input file '{}' does not exist", key, path->string()));
    }
  }
  if (popular_engine_override && !std::filesystem::is_regular_file(*popular_engine_override)) {
    throw InputError(fmt::format("popular_engine_override: input file '{}' does not exist",
                                 popular_engine_override->string()));
  }
}

std::vector<const ingest::IngestReport*> Datasets::reports() const {
  return {&ontime.report,       &b43.report,          &tail_registry.report,
          &engine_codes.report, &icao_engines.report, &bada_ccd.report};
}

Datasets load_datasets(const RunConfig& config, unsigned threads) {
  const auto policy = threads > 1 ? std::launch::async : std::launch::deferred;
  auto ontime = std::async(policy, [&] { return ingest::parse_ontime(config.ontime); });
  auto b43 = std::async(policy, [&] { return ingest::parse_b43(config.b43); });
  auto registry =
      std::async(policy, [&] { return ingest::parse_tail_registry(config.tail_registry); });
  auto codes =
      std::async(policy, [&] { return ingest::parse_engine_codes(config.engine_codes); });
  auto icao =
      std::async(policy, [&] { return ingest::parse_icao_databank(config.icao_engines); });
  auto bada = std::async(policy, [&] { return ingest::parse_bada_ccd(config.bada_ccd); });
  Datasets data;
  // get() in a fixed order so the first failing table is reported
  // deterministically.
  data.ontime = ontime.get();
  data.b43 = b43.get();
  data.tail_registry = registry.get();
  data.engine_codes = codes.get();
  data.icao_engines = icao.get();
  data.bada_ccd = bada.get();
  return data;
}

matching::MatchingConfig matching_config(const RunConfig& config) {
  matching::MatchingConfig mc;
  mc.rules = matching::NormalizationRuleSet::load(config.normalization_rules);
  mc.fallback = matching::FamilyFallbackTable::load(config.family_fallback);
  if (config.popular_engine_override) {
    mc.popular_override = matching::PopularEngineTable::load(*config.popular_engine_override);
  }
  mc.jaccard_threshold = config.jaccard_threshold;
  return mc;
}

matching::MatchingTables build_tables(const Datasets& data, const RunConfig& config) {
  if (config.interpolation_key == emissions::CcdKey::kDistance) {
    for (const auto& p : data.bada_ccd.rows) {
      if (!p.has_distance_key()) {
        throw InputError(fmt::format(
            "interpolation_key = distance, but CCD profile '{}' lacks increasing "
            "distance_mi values",
            p.canonical_type));
      }
    }
  }
  matching::MatchingInputs inputs{data.b43.rows, data.tail_registry.rows,
                                  data.engine_codes.rows, data.icao_engines.rows,
                                  data.bada_ccd.rows};
  return matching::MatchingTables::build(inputs, matching_config(config));
}

std::vector<aggregation::FlightOutcome> process_flights(
    std::span<const ingest::FlightRecord> flights, const matching::MatchingTables& tables,
    const emissions::EmissionsModel* model, unsigned threads) {
  std::vector<aggregation::FlightOutcome> out(flights.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto& o = out[i];
      o.resolved = matching::resolve_flight(flights[i], tables);
      if (!model || !o.resolved.computable()) continue;
      o.emissions = emissions::flight_emissions(o.resolved, *model);
      if (!o.emissions) o.resolved.mark_incomputable(IncomputableCause::kMissingFactors);
    }
  };
  threads = std::max(1u, threads);
  const std::size_t n = flights.size();
  if (threads == 1 || n < 2) {
    work(0, n);
    return out;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  const std::size_t chunk = (n + workers - 1) / workers;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
  }
  return out;
}

double CoverageReport::coverage() const {
  return total_flights == 0 ? 0.0
                            : static_cast<double>(computed_flights) /
                                  static_cast<double>(total_flights);
}

std::size_t CoverageReport::cause_count(IncomputableCause cause) const {
  auto it = causes.find(cause);
  return it == causes.end() ? 0 : it->second;
}

CoverageReport coverage_report(std::span<const aggregation::FlightOutcome> outcomes,
                               const Datasets& data, bool dry_run) {
  CoverageReport r;
  for (IncomputableCause c : matching::kAllIncomputableCauses) r.causes[c] = 0;
  r.total_flights = outcomes.size();
  for (const auto& o : outcomes) {
    const auto& rf = o.resolved;
    const bool computed = dry_run ? rf.computable() : o.emissions.has_value();
    if (computed) {
      ++r.computed_flights;
      if (rf.provenance.has(Provenance::kEngineExact)) ++r.engine_exact;
      if (rf.provenance.has(Provenance::kEngineJaccard)) ++r.engine_jaccard;
      if (rf.provenance.has(Provenance::kEnginePopularFallback)) ++r.engine_popular_fallback;
      if (rf.provenance.has(Provenance::kFamilyFallback)) ++r.family_fallback;
      if (o.emissions) {
        if (o.emissions->ccd_range == emissions::RangeFlag::kExtrapolatedLow) ++r.ccd_extrapolated_low;
        if (o.emissions->ccd_range == emissions::RangeFlag::kExtrapolatedHigh) ++r.ccd_extrapolated_high;
      }
    } else {
      ++r.causes[rf.cause];
    }
  }
  for (const auto* rep : data.reports()) r.ingest.push_back(*rep);
  return r;
}

std::string CoverageReport::to_json() const {
  nlohmann::ordered_json j;
  j["total_flights"] = total_flights;
  j["computed_flights"] = computed_flights;
  j["coverage"] = coverage();
  nlohmann::ordered_json c = nlohmann::ordered_json::object();
  for (IncomputableCause cause : matching::kAllIncomputableCauses) {
    c[std::string(cause_key(cause))] = cause_count(cause);
  }
  j["incomputable_causes"] = c;
  j["fallbacks"] = {{"ENGINE_EXACT", engine_exact},
                    {"ENGINE_JACCARD", engine_jaccard},
                    {"ENGINE_POPULAR_FALLBACK", engine_popular_fallback},
                    {"FAMILY_FALLBACK", family_fallback},
                    {"CCD_EXTRAPOLATED_LOW", ccd_extrapolated_low},
                    {"CCD_EXTRAPOLATED_HIGH", ccd_extrapolated_high}};
  nlohmann::ordered_json tables = nlohmann::ordered_json::array();
  for (const auto& rep : ingest) {
    nlohmann::ordered_json t;
    t["table"] = rep.table;
    t["total_rows"] = rep.total_rows;
    t["accepted"] = rep.accepted;
    t["rejected"] = rep.rejected;
    t["flagged_incomputable"] = rep.flagged_incomputable;
    nlohmann::ordered_json rej = nlohmann::ordered_json::array();
    for (const auto& r : rep.rejections) rej.push_back({{"line", r.line}, {"reason", r.reason}});
    t["rejections"] = rej;
    tables.push_back(t);
  }
  j["ingest"] = tables;
  return j.dump(2) + "\n";
}

CoverageReport CoverageReport::from_json(std::string_view text) {
  CoverageReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.total_flights = j.at("total_flights").get<std::size_t>();
    r.computed_flights = j.at("computed_flights").get<std::size_t>();
    const auto& causes = j.at("incomputable_causes");
    for (IncomputableCause cause : matching::kAllIncomputableCauses) {
      r.causes[cause] = causes.value(std::string(cause_key(cause)), std::size_t{0});
    }
    const auto& fb = j.at("fallbacks");
    r.engine_exact = fb.value("ENGINE_EXACT", std::size_t{0});
    r.engine_jaccard = fb.value("ENGINE_JACCARD", std::size_t{0});
    r.engine_popular_fallback = fb.value("ENGINE_POPULAR_FALLBACK", std::size_t{0});
    r.family_fallback = fb.value("FAMILY_FALLBACK", std::size_t{0});
    r.ccd_extrapolated_low = fb.value("CCD_EXTRAPOLATED_LOW", std::size_t{0});
    r.ccd_extrapolated_high = fb.value("CCD_EXTRAPOLATED_HIGH", std::size_t{0});
    for (const auto& t : j.value("ingest", nlohmann::json::array())) {
      ingest::IngestReport rep;
      rep.table = t.at("table").get<std::string>();
      rep.total_rows = t.at("total_rows").get<std::size_t>();
      rep.accepted = t.at("accepted").get<std::size_t>();
      rep.rejected = t.at("rejected").get<std::size_t>();
      rep.flagged_incomputable = t.value("flagged_incomputable", std::size_t{0});
      for (const auto& x : t.value("rejections", nlohmann::json::array())) {
        rep.rejections.push_back({x.at("line").get<std::size_t>(), x.at("reason").get<std::string>()});
      }
      r.ingest.push_back(std::move(rep));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(fmt::format("malformed coverage report: {}", e.what()));
  }
  return r;
}

std::string CoverageReport::to_text() const {
  std::string s;
  s += fmt::format("flights: {} total, {} computed, coverage {:.4f}\n", total_flights,
                   computed_flights, coverage());
  for (IncomputableCause cause : matching::kAllIncomputableCauses) {
    if (auto n = cause_count(cause)) s += fmt::format("  {}={}\n", cause_key(cause), n);
  }
  s += fmt::format(
      "resolution: ENGINE_EXACT={} ENGINE_JACCARD={} ENGINE_POPULAR_FALLBACK={} "
      "FAMILY_FALLBACK={}\n",
      engine_exact, engine_jaccard, engine_popular_fallback, family_fallback);
  if (ccd_extrapolated_low || ccd_extrapolated_high) {
    s += fmt::format("ccd extrapolation: low={} high={}\n", ccd_extrapolated_low,
                     ccd_extrapolated_high);
  }
  for (const auto& rep : ingest) {
    s += fmt::format("table {}: {} rows, {} accepted, {} rejected\n", rep.table,
                     rep.total_rows, rep.accepted, rep.rejected);
    std::size_t shown = 0;
    for (const auto& r : rep.rejections) {
      if (++shown > 5) {
        s += fmt::format("    ... {} more\n", rep.rejections.size() - 5);
        break;
      }
      s += fmt::format("    line {}: {}\n", r.line, r.reason);
    }
  }
  return s;
}

CoverageReport validate(const RunConfig& config, unsigned threads) {
  config.check_paths();
  const Datasets data = load_datasets(config, threads);
  const auto tables = build_tables(data, config);
  const auto outcomes = process_flights(data.ontime.rows, tables, nullptr, threads);
  return coverage_report(outcomes, data, /*dry_run=*/true);
}

RunResult run(const RunConfig& config, unsigned threads) {
  config.check_paths();
  const Datasets data = load_datasets(config, threads);
  const auto tables = build_tables(data, config);
  const emissions::EmissionsModel model(
      data.icao_engines.rows, data.bada_ccd.rows,
      {config.co2e_factors, config.engine_multiplier, config.interpolation_key});
  RunResult result;
  result.outcomes = process_flights(data.ontime.rows, tables, &model, threads);
  result.coverage = coverage_report(result.outcomes, data, /*dry_run=*/false);
  write_outputs(result, config);
  return result;
}

void write_flight_emissions(std::ostream& out,
                            std::span<const aggregation::FlightOutcome> outcomes) {
  std::vector<std::string> header = {"flight_date", "carrier",     "flight_number",
                                     "tail_number", "origin",      "dest",
                                     "distance_mi", "air_time_min", "canonical_type",
                                     "emissions_type", "engine_uid", "seat_count",
                                     "efficiency_factor"};
  for (std::string_view cycle : {"lto", "ccd"}) {
    for (Gas gas : kAllGases) {
      header.push_back(fmt::format("{}_{}_kg", cycle, gas_column(gas)));
    }
  }
  header.insert(header.end(), {"lto_co2e_kg", "ccd_co2e_kg", "total_co2e_kg",
                               "per_seat_co2e_kg", "per_seat_mile_co2_kg", "provenance",
                               "ccd_range"});
  csv::write_row(out, header);
  for (const auto& o : outcomes) {
    if (!o.emissions) continue;
    const auto& rf = o.resolved;
    const auto& e = *o.emissions;
    std::vector<std::string> f;
    f.reserve(header.size());
    write_flight_identity(f, rf.flight);
    f.push_back(rf.canonical_type);
    f.push_back(rf.emissions_type);
    f.push_back(rf.engine_uid);
    f.push_back(std::to_string(rf.seat_count));
    f.push_back(csv::format_fixed(rf.efficiency_factor, 6));
    for (Gas gas : kAllGases) f.push_back(csv::format_fixed(e.lto[gas], 2));
    for (Gas gas : kAllGases) f.push_back(csv::format_fixed(e.ccd[gas], 2));
    f.push_back(csv::format_fixed(e.lto_co2e_kg, 2));
    f.push_back(csv::format_fixed(e.ccd_co2e_kg, 2));
    f.push_back(csv::format_fixed(e.total_co2e_kg, 2));
    f.push_back(csv::format_fixed(e.per_seat_co2e_kg, 2));
    f.push_back(csv::format_fixed(e.per_seat_mile_co2_kg, 6));
    f.push_back(rf.provenance.to_string());
    f.push_back(std::string(emissions::range_flag_name(e.ccd_range)));
    csv::write_row(out, f);
  }
}

void write_incomputable(std::ostream& out,
                        std::span<const aggregation::FlightOutcome> outcomes) {
  csv::write_row(out, {"flight_date", "carrier", "flight_number", "tail_number", "origin",
                       "dest", "distance_mi", "air_time_min", "cause", "provenance"});
  for (const auto& o : outcomes) {
    if (o.emissions) continue;
    std::vector<std::string> f;
    write_flight_identity(f, o.resolved.flight);
    f.push_back(std::string(matching::cause_name(o.resolved.cause)));
    f.push_back(o.resolved.provenance.to_string());
    csv::write_row(out, f);
  }
}

void write_outputs(const RunResult& result, const RunConfig& config) {
  namespace fs = std::filesystem;
  const auto& outcomes = result.outcomes;
  const auto& factors = config.co2e_factors;
  const fs::path target = config.output_dir;
  fs::path staging = target;
  staging += ".staging";
  std::error_code ec;
  fs::remove_all(staging, ec);

  try {
    fs::create_directories(staging);
    const auto airlines = aggregation::aggregate_airlines(outcomes);
    const auto airports = aggregation::aggregate_airports(outcomes, factors);
    const auto [lto, ccd] = aggregation::gas_breakdowns(outcomes, factors);
    const auto scatter = aggregation::scatter_datasets(outcomes, config.unep);
    if (!config.unep) {
      fmt::print(stderr,
                 "warning: no UNEP baseline configured; {} has no baseline column\n",
                 kScatterSeatMileCsv);
    }
    const auto routes = aggregation::aggregate_groups(outcomes, aggregation::GroupKey::kRoute);
    const auto aircraft = aggregation::aggregate_groups(outcomes, aggregation::GroupKey::kAirframe);
    const auto engines = aggregation::aggregate_groups(outcomes, aggregation::GroupKey::kEngine);

    auto file = [&](std::string_view name) { return staging / name; };
    write_file(file(kFlightEmissionsCsv), [&](auto& o) { write_flight_emissions(o, outcomes); });
    write_file(file(kIncomputableCsv), [&](auto& o) { write_incomputable(o, outcomes); });
    write_file(file(kAirlineSummaryCsv), [&](auto& o) { aggregation::write_airline_summary(o, airlines); });
    write_file(file(kAirportLtoCsv), [&](auto& o) { aggregation::write_airport_lto(o, airports); });
    write_file(file(kGasBreakdownCsv), [&](auto& o) { aggregation::write_gas_breakdown(o, lto, ccd); });
    write_file(file(kScatterCo2eCsv),
               [&](auto& o) { aggregation::write_scatter_co2e(o, scatter.co2e_vs_distance); });
    write_file(file(kScatterSeatMileCsv), [&](auto& o) {
      aggregation::write_scatter_seat_mile(o, scatter.seat_mile_vs_distance, config.unep.has_value());
    });
    write_file(file(kRouteSummaryCsv), [&](auto& o) { aggregation::write_group_summary(o, "route", routes); });
    write_file(file(kAircraftSummaryCsv),
               [&](auto& o) { aggregation::write_group_summary(o, "canonical_type", aircraft); });
    write_file(file(kEngineSummaryCsv),
               [&](auto& o) { aggregation::write_group_summary(o, "engine_uid", engines); });
    write_file(file(kCoverageJson), [&](auto& o) { o << result.coverage.to_json(); });

    fs::create_directories(target);
    for (const auto& entry : fs::directory_iterator(staging)) {
      fs::rename(entry.path(), target / entry.path().filename());
    }
    fs::remove_all(staging);
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(staging, ec);
    throw InputError(fmt::format("writing outputs to '{}': {}", target.string(), e.what()));
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
}

}  // namespace aeroemit::pipeline
