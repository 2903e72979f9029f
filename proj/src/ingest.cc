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

#include "aeroemit/ingest.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include <fmt/format.h>

#include "aeroemit/csv.h"
#include "aeroemit/errors.h"

namespace aeroemit::ingest {
namespace {

std::string upper(std::string_view text) {
  std::string out(csv::trim(text));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return out;
}

bool is_airport_code(std::string_view code) {
  return code.size() == 3 &&
         std::all_of(code.begin(), code.end(), [](unsigned char c) {
           return std::isupper(c) || std::isdigit(c);
         });
}

// Result of reading an optional non-negative decimal field.
struct OptionalField {
  std::optional<double> value;
  bool ok = true;
};

OptionalField optional_non_negative(std::string_view field) {
  if (csv::trim(field).empty()) return {};
  auto v = csv::parse_double(field);
  if (!v || *v < 0.0) return {std::nullopt, false};
  return {v, true};
}

csv::Table load(const std::filesystem::path& path, std::string_view name,
                std::span<const std::string_view> header) {
  csv::Table table = csv::read(path, name);
  csv::require_header(table, name, header);
  return table;
}

// Returns an error string for rows that cannot be split or have the wrong
// arity, empty otherwise.
std::string shape_error(const csv::Row& row, std::size_t arity) {
  if (!row.error.empty()) return row.error;
  if (row.fields.size() != arity) {
    return fmt::format("expected {} fields, got {}", arity, row.fields.size());
  }
  return {};
}

[[noreturn]] void duplicate_key(std::string_view table,
                                const std::filesystem::path& path,
                                std::size_t line, std::string_view key,
                                std::size_t first_line) {
  throw InputError(fmt::format(
      "{}: {}:{}: duplicate primary key '{}' (first seen on line {})", table,
      path.string(), line, key, first_line));
}

std::string fmt_double(double v) { return csv::format_exact(v); }

std::string fmt_optional(const std::optional<double>& v) {
  return v ? csv::format_exact(*v) : std::string();
}

}  // namespace

bool CcdProfile::has_distance_key() const {
  if (knots.empty()) return false;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!knots[i].distance_mi) return false;
    if (i > 0 && !(*knots[i].distance_mi > *knots[i - 1].distance_mi)) {
      return false;
    }
  }
  return true;
}

std::string normalize_tail(std::string_view tail) { return upper(tail); }

std::string format_date(const std::chrono::year_month_day& date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()),
                     static_cast<unsigned>(date.day()));
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view text) {
  text = csv::trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  auto y = csv::parse_int(text.substr(0, 4));
  auto m = csv::parse_int(text.substr(5, 2));
  auto d = csv::parse_int(text.substr(8, 2));
  if (!y || !m || !d || *m < 1 || *d < 1) return std::nullopt;
  std::chrono::year_month_day date{std::chrono::year(static_cast<int>(*y)),
                                   std::chrono::month(static_cast<unsigned>(*m)),
                                   std::chrono::day(static_cast<unsigned>(*d))};
  if (!date.ok()) return std::nullopt;
  return date;
}

Parsed<FlightRecord> parse_ontime(const std::filesystem::path& path) {
  constexpr std::string_view kName = "ontime";
  const csv::Table table = load(path, kName, kOntimeHeader);
  Parsed<FlightRecord> out;
  out.report.table = kName;
  for (const csv::Row& row : table.rows) {
    if (auto err = shape_error(row, kOntimeHeader.size()); !err.empty()) {
      out.report.reject(row.line, err);
      continue;
    }
    const auto& f = row.fields;
    FlightRecord rec;
    auto date = parse_date(f[0]);
    if (!date) {
      out.report.reject(row.line, fmt::format("invalid flight_date '{}'", f[0]));
      continue;
    }
    rec.flight_date = *date;
    rec.carrier_code = upper(f[1]);
    rec.flight_number = std::string(csv::trim(f[2]));
    if (rec.carrier_code.empty() || rec.flight_number.empty()) {
      out.report.reject(row.line, "carrier and flight_number are required");
      continue;
    }
    if (auto tail = normalize_tail(f[3]); !tail.empty()) rec.tail_number = tail;
    rec.origin = upper(f[4]);
    rec.destination = upper(f[5]);
    if (!is_airport_code(rec.origin) || !is_airport_code(rec.destination)) {
      out.report.reject(row.line,
                        fmt::format("invalid airport code '{}' or '{}'", f[4], f[5]));
      continue;
    }
    if (rec.origin == rec.destination) {
      out.report.reject(row.line, "origin equals destination");
      continue;
    }
    auto air = optional_non_negative(f[6]);
    auto taxi_in = optional_non_negative(f[7]);
    auto taxi_out = optional_non_negative(f[8]);
    if (!air.ok || !taxi_in.ok || !taxi_out.ok) {
      out.report.reject(row.line,
                        "air_time_min, taxi_in_min and taxi_out_min must be "
                        "non-negative decimals or empty");
      continue;
    }
    rec.air_time_min = air.value;
    rec.taxi_in_min = taxi_in.value;
    rec.taxi_out_min = taxi_out.value;
    auto distance = csv::parse_double(f[9]);
    if (!distance || *distance <= 0.0) {
      out.report.reject(row.line,
                        fmt::format("distance_mi must be positive, got '{}'", f[9]));
      continue;
    }
    rec.distance_mi = *distance;
    if (rec.incomputable()) ++out.report.flagged_incomputable;
    out.rows.push_back(std::move(rec));
    out.report.accept();
  }
  return out;
}

Parsed<AirframeRecord> parse_b43(const std::filesystem::path& path) {
  constexpr std::string_view kName = "b43";
  const csv::Table table = load(path, kName, kB43Header);
  Parsed<AirframeRecord> out;
  out.report.table = kName;
  std::map<std::string, std::size_t> seen;
  for (const csv::Row& row : table.rows) {
    if (auto err = shape_error(row, kB43Header.size()); !err.empty()) {
      out.report.reject(row.line, err);
      continue;
    }
    const auto& f = row.fields;
    AirframeRecord rec;
    rec.tail_number = normalize_tail(f[0]);
    rec.raw_type_designator = std::string(csv::trim(f[1]));
    if (rec.tail_number.empty() || rec.raw_type_designator.empty()) {
      out.report.reject(row.line, "tail_number and type_designator are required");
      continue;
    }
    if (auto [it, fresh] = seen.emplace(rec.tail_number, row.line); !fresh) {
      duplicate_key(kName, path, row.line, rec.tail_number, it->second);
    }
    auto seats = csv::parse_int(f[2]);
    if (!seats || *seats < 1) {
      out.report.reject(row.line,
                        fmt::format("seat_count must be a positive integer, got '{}'", f[2]));
      continue;
    }
    rec.seat_count = static_cast<int>(*seats);
    if (!csv::trim(f[3]).empty()) {
      auto engines = csv::parse_int(f[3]);
      if (!engines || *engines < 1 || *engines > 4) {
        out.report.reject(row.line,
                          fmt::format("engine_count must be 1-4, got '{}'", f[3]));
        continue;
      }
      rec.engine_count = static_cast<int>(*engines);
    }
    out.rows.push_back(std::move(rec));
    out.report.accept();
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const auto& a, const auto& b) { return a.tail_number < b.tail_number; });
  return out;
}

Parsed<TailEngineRecord> parse_tail_registry(const std::filesystem::path& path) {
  constexpr std::string_view kName = "tail_registry";
  const csv::Table table = load(path, kName, kTailRegistryHeader);
  Parsed<TailEngineRecord> out;
  out.report.table = kName;
  std::map<std::string, std::size_t> seen;
  for (const csv::Row& row : table.rows) {
    if (auto err = shape_error(row, kTailRegistryHeader.size()); !err.empty()) {
      out.report.reject(row.line, err);
      continue;
    }
    TailEngineRecord rec{normalize_tail(row.fields[0]),
                         std::string(csv::trim(row.fields[1]))};
    if (rec.tail_number.empty()) {
      out.report.reject(row.line, "tail_number is required");
      continue;
    }
    if (auto [it, fresh] = seen.emplace(rec.tail_number, row.line); !fresh) {
      duplicate_key(kName, path, row.line, rec.tail_number, it->second);
    }
    if (rec.faa_engine_designation.empty()) {
      out.report.reject(row.line, "empty engine_designation");
      continue;
    }
    out.rows.push_back(std::move(rec));
    out.report.accept();
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const auto& a, const auto& b) { return a.tail_number < b.tail_number; });
  return out;
}

Parsed<EngineCodeRecord> parse_engine_codes(const std::filesystem::path& path) {
  constexpr std::string_view kName = "engine_codes";
  const csv::Table table = load(path, kName, kEngineCodesHeader);
  Parsed<EngineCodeRecord> out;
  out.report.table = kName;
  std::map<std::string, std::size_t> seen;
  for (const csv::Row& row : table.rows) {
    if (auto err = shape_error(row, kEngineCodesHeader.size()); !err.empty()) {
      out.report.reject(row.line, err);
      continue;
    }
    EngineCodeRecord rec{upper(row.fields[0]),
                         std::string(csv::trim(row.fields[1]))};
    if (rec.faa_code.empty() || rec.designation_text.empty()) {
      out.report.reject(row.line, "faa_code and designation are required");
      continue;
    }
    if (auto [it, fresh] = seen.emplace(rec.faa_code, row.line); !fresh) {
      duplicate_key(kName, path, row.line, rec.faa_code, it->second);
    }
    out.rows.push_back(std::move(rec));
    out.report.accept();
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const auto& a, const auto& b) { return a.faa_code < b.faa_code; });
  return out;
}

Parsed<EngineLtoFactors> parse_icao_databank(const std::filesystem::path& path) {
  constexpr std::string_view kName = "icao_engines";
  const csv::Table table = load(path, kName, kIcaoEnginesHeader);
  Parsed<EngineLtoFactors> out;
  out.report.table = kName;

  struct Pending {
    EngineLtoFactors factors;
    std::set<std::pair<std::size_t, std::size_t>> cells;  // (mode, gas)
    std::vector<std::size_t> lines;
    std::vector<std::string> problems;
  };
  std::map<std::string, Pending> engines;
  std::map<std::tuple<std::string, std::size_t, std::size_t>, std::size_t> seen;

  for (const csv::Row& row : table.rows) {
    if (auto err = shape_error(row, kIcaoEnginesHeader.size()); !err.empty()) {
      out.report.reject(row.line, err);
      continue;
    }
    const auto& f = row.fields;
    const std::string uid(csv::trim(f[0]));
    auto gas = parse_gas(csv::trim(f[1]));
    auto mode = parse_lto_mode(csv::trim(f[2]));
    if (uid.empty() || !gas || !mode) {
      out.report.reject(row.line,
                        fmt::format("unknown engine_uid/gas/mode '{}','{}','{}'",
                                    f[0], f[1], f[2]));
      continue;
    }
    const auto gi = static_cast<std::size_t>(*gas);
    const auto mi = static_cast<std::size_t>(*mode);
    if (auto [it, fresh] = seen.emplace(std::tuple{uid, mi, gi}, row.line); !fresh) {
      duplicate_key(kName, path, row.line,
                    fmt::format("{}/{}/{}", uid, gas_name(*gas), lto_mode_name(*mode)),
                    it->second);
    }
    Pending& p = engines[uid];
    p.factors.engine_uid = uid;
    p.lines.push_back(row.line);
    auto rate = csv::parse_double(f[3]);
    if (!rate || *rate < 0.0) {
      p.problems.push_back(fmt::format("line {}: rate_kg_per_s must be a "
                                       "non-negative decimal, got '{}'",
                                       row.line, f[3]));
      continue;
    }
    p.factors.mode_rates(*mode)[*gas] = *rate;
    p.cells.emplace(mi, gi);
  }

  // Engines are accepted or rejected as a unit: all 16 cells must be valid.
  for (auto& [uid, p] : engines) {
    if (p.problems.empty() && p.cells.size() == 16) {
      out.rows.push_back(std::move(p.factors));
      for (std::size_t i = 0; i < p.lines.size(); ++i) out.report.accept();
      continue;
    }
    std::string reason =
        p.problems.empty()
            ? fmt::format("engine '{}' has {} of 16 rates", uid, p.cells.size())
            : fmt::format("engine '{}' rejected: {}", uid, p.problems.front());
    for (std::size_t line : p.lines) out.report.reject(line, reason);
  }
  std::sort(out.report.rejections.begin(), out.report.rejections.end(),
            [](const auto& a, const auto& b) { return a.line < b.line; });
  return out;
}

Parsed<CcdProfile> parse_bada_ccd(const std::filesystem::path& path) {
  constexpr std::string_view kName = "bada_ccd";
  const csv::Table table = csv::read(path, kName);
  const bool with_distance =
      table.header.size() == kBadaCcdHeader.size() + 1 &&
      table.header.back() == kBadaDistanceColumn;
  if (with_distance) {
    csv::Table trimmed_header = {table.path,
                                 {table.header.begin(), table.header.end() - 1},
                                 {}};
    csv::require_header(trimmed_header, kName, kBadaCcdHeader);
  } else {
    csv::require_header(table, kName, kBadaCcdHeader);
  }
  const std::size_t arity = table.header.size();

  Parsed<CcdProfile> out;
  out.report.table = kName;
  struct Pending {
    CcdProfile profile;
    std::vector<std::size_t> lines;
  };
  std::map<std::string, Pending> types;

  for (const csv::Row& row : table.rows) {
    if (auto err = shape_error(row, arity); !err.empty()) {
      out.report.reject(row.line, err);
      continue;
    }
    const auto& f = row.fields;
    const std::string type = upper(f[0]);
    if (type.empty()) {
      out.report.reject(row.line, "canonical_type is required");
      continue;
    }
    auto duration = csv::parse_double(f[1]);
    if (!duration || *duration <= 0.0) {
      out.report.reject(row.line,
                        fmt::format("duration_min must be positive, got '{}'", f[1]));
      continue;
    }
    CcdKnot knot;
    knot.duration_min = *duration;
    bool masses_ok = true;
    for (Gas gas : kAllGases) {
      auto v = csv::parse_double(f[2 + static_cast<std::size_t>(gas)]);
      if (!v || *v < 0.0) {
        masses_ok = false;
        break;
      }
      knot.emissions_kg[gas] = *v;
    }
    if (!masses_ok) {
      out.report.reject(row.line, "emission masses must be non-negative decimals");
      continue;
    }
    if (with_distance && !csv::trim(f[6]).empty()) {
      auto d = csv::parse_double(f[6]);
      if (!d || *d <= 0.0) {
        out.report.reject(row.line,
                          fmt::format("distance_mi must be positive, got '{}'", f[6]));
        continue;
      }
      knot.distance_mi = *d;
    }
    Pending& p = types[type];
    p.profile.canonical_type = type;
    p.profile.knots.push_back(knot);
    p.lines.push_back(row.line);
  }

  for (auto& [type, p] : types) {
    auto& knots = p.profile.knots;
    std::sort(knots.begin(), knots.end(), [](const auto& a, const auto& b) {
      return a.duration_min < b.duration_min;
    });
    std::string reason;
    if (knots.size() < 2) {
      reason = fmt::format("type '{}' has {} knot(s); at least 2 required", type,
                           knots.size());
    }
    for (std::size_t i = 1; reason.empty() && i < knots.size(); ++i) {
      if (knots[i].duration_min == knots[i - 1].duration_min) {
        reason = fmt::format("type '{}' repeats duration {}", type,
                             csv::format_exact(knots[i].duration_min));
      }
    }
    if (reason.empty()) {
      out.rows.push_back(std::move(p.profile));
      for (std::size_t i = 0; i < p.lines.size(); ++i) out.report.accept();
    } else {
      for (std::size_t line : p.lines) out.report.reject(line, reason);
    }
  }
  std::sort(out.report.rejections.begin(), out.report.rejections.end(),
            [](const auto& a, const auto& b) { return a.line < b.line; });
  return out;
}

void write_ontime(std::ostream& out, std::span<const FlightRecord> rows) {
  csv::write_row(out, std::span<const std::string_view>(kOntimeHeader));
  for (const auto& r : rows) {
    csv::write_row(out, std::vector<std::string>{
                            format_date(r.flight_date), r.carrier_code,
                            r.flight_number, r.tail_number.value_or(""),
                            r.origin, r.destination, fmt_optional(r.air_time_min),
                            fmt_optional(r.taxi_in_min),
                            fmt_optional(r.taxi_out_min), fmt_double(r.distance_mi)});
  }
}

void write_b43(std::ostream& out, std::span<const AirframeRecord> rows) {
  csv::write_row(out, std::span<const std::string_view>(kB43Header));
  for (const auto& r : rows) {
    csv::write_row(out, std::vector<std::string>{
                            r.tail_number, r.raw_type_designator,
                            std::to_string(r.seat_count),
                            std::to_string(r.engine_count)});
  }
}

void write_tail_registry(std::ostream& out,
                         std::span<const TailEngineRecord> rows) {
  csv::write_row(out, std::span<const std::string_view>(kTailRegistryHeader));
  for (const auto& r : rows) {
    csv::write_row(out, {r.tail_number, r.faa_engine_designation});
  }
}

void write_engine_codes(std::ostream& out,
                        std::span<const EngineCodeRecord> rows) {
  csv::write_row(out, std::span<const std::string_view>(kEngineCodesHeader));
  for (const auto& r : rows) csv::write_row(out, {r.faa_code, r.designation_text});
}

void write_icao_databank(std::ostream& out,
                         std::span<const EngineLtoFactors> rows) {
  csv::write_row(out, std::span<const std::string_view>(kIcaoEnginesHeader));
  for (const auto& r : rows) {
    for (LtoMode mode : kAllLtoModes) {
      for (Gas gas : kAllGases) {
        csv::write_row(out, {r.engine_uid, gas_name(gas), lto_mode_name(mode),
                             fmt_double(r.rate(gas, mode))});
      }
    }
  }
}

void write_bada_ccd(std::ostream& out, std::span<const CcdProfile> rows) {
  const bool with_distance = std::any_of(
      rows.begin(), rows.end(), [](const auto& p) {
        return std::any_of(p.knots.begin(), p.knots.end(),
                           [](const auto& k) { return k.distance_mi.has_value(); });
      });
  std::vector<std::string> header(kBadaCcdHeader.begin(), kBadaCcdHeader.end());
  if (with_distance) header.emplace_back(kBadaDistanceColumn);
  csv::write_row(out, header);
  for (const auto& p : rows) {
    for (const auto& k : p.knots) {
      std::vector<std::string> fields = {p.canonical_type,
                                         fmt_double(k.duration_min)};
      for (Gas gas : kAllGases) fields.push_back(fmt_double(k.emissions_kg[gas]));
      if (with_distance) fields.push_back(fmt_optional(k.distance_mi));
      csv::write_row(out, fields);
    }
  }
}

}  // namespace aeroemit::ingest
