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

#include "test_support.h"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <unistd.h>

namespace aeroemit::testing {
namespace fs = std::filesystem;

TempDir::TempDir() {
  static int counter = 0;
  path_ = fs::temp_directory_path() /
          fmt::format("aeroemit-test-{}-{}", ::getpid(), counter++);
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, std::string_view text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path sample_dir() { return fs::path(AEROEMIT_SOURCE_DIR) / "data" / "sample"; }

ingest::EngineLtoFactors cfm56_7b27e() {
  ingest::EngineLtoFactors e;
  e.engine_uid = "CFM56-7B27E";
  e.mode_rates(LtoMode::kTakeoff) = {0.00003879, 4.07295, 0.00040083, 0.03095442};
  e.mode_rates(LtoMode::kClimbout) = {0.00002062, 3.24765, 0.00017527, 0.01844459};
  e.mode_rates(LtoMode::kApproach) = {0.00001715, 1.08045, 0.00096726, 0.00311787};
  e.mode_rates(LtoMode::kIdle) = {0.0001694, 0.3465, 0.0032329, 0.0004796};
  return e;
}

ingest::CcdProfile b737_900er_profile() {
  ingest::CcdProfile p;
  p.canonical_type = "737-900ER";
  const struct {
    double d, hc, co2, co, nox;
  } rows[] = {
      {22, 0.35, 3114, 2.93, 18.3},     {32, 0.51, 4626, 4.05, 27.47},
      {39, 0.57, 5608, 4.36, 32},       {71, 0.84, 10147, 5.64, 52.69},
      {105, 1.13, 14300, 7.12, 70.1},   {139, 1.44, 18294, 8.26, 86.64},
      {206, 1.97, 26953, 10.42, 123.27}, {273, 2.5, 36023, 12.62, 162.82},
      {340, 3.03, 44475, 14.73, 197.69}, {410, 3.55, 54250, 17.11, 240.25},
  };
  for (const auto& r : rows) {
    p.knots.push_back({r.d, std::nullopt, GasVector(r.hc, r.co2, r.co, r.nox)});
  }
  return p;
}

matching::MatchingConfig Corpus::matching_config() const {
  matching::MatchingConfig mc;
  mc.rules = {};
  for (const auto& [pattern, canonical] : rules) mc.rules.add(pattern, canonical);
  mc.fallback = {};
  for (const auto& f : fallbacks) mc.fallback.add(f.missing, f.surrogate, f.factor);
  return mc;
}

Corpus make_corpus(const CorpusSpec& spec) {
  if (spec.engines != 2 * spec.airframe_types || spec.fallback_types >= spec.airframe_types ||
      spec.airports < 2 || spec.tails < spec.airframe_types) {
    throw std::invalid_argument("inconsistent corpus spec");
  }
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  Corpus c;
  const std::size_t with_profile = spec.airframe_types - spec.fallback_types;
  std::vector<std::string> types;
  for (std::size_t k = 0; k < spec.airframe_types; ++k) {
    types.push_back(fmt::format("SYN-{:02d}", k));
    c.rules.emplace_back(fmt::format("(B|BOEING)?SYN0?{}", k), types.back());
  }

  // CCD profiles: 10 knots, masses affine in duration with per-type scale.
  static constexpr double kDurations[] = {20, 30, 45, 70, 100, 140, 200, 270, 340, 420};
  for (std::size_t k = 0; k < with_profile; ++k) {
    ingest::CcdProfile p;
    p.canonical_type = types[k];
    const double burn = uniform(60.0, 160.0);  // kg CO2 per minute
    const double hc = uniform(0.005, 0.02);
    const double co = uniform(0.02, 0.08);
    const double nox = uniform(0.3, 0.9);
    for (double d : kDurations) {
      const double wobble = uniform(0.97, 1.03);
      const double co2 = (burn * d + 300.0) * wobble;
      p.knots.push_back({d, std::nullopt,
                         GasVector(hc * d * wobble, co2, co * d + 1.0, nox * d * wobble)});
    }
    c.profiles.push_back(std::move(p));
  }
  for (std::size_t k = with_profile; k < spec.airframe_types; ++k) {
    c.fallbacks.push_back({types[k], types[k - with_profile], k % 2 ? 0.9 : 0.85});
  }

  // Two engines per airframe type.
  std::vector<std::string> uids;
  for (std::size_t e = 0; e < spec.engines; ++e) {
    ingest::EngineLtoFactors f;
    f.engine_uid = fmt::format("SJ{:02d}-{}B{:02d}", e / 2, 5 + e % 2, e);
    const double scale = uniform(0.4, 1.6);
    f.mode_rates(LtoMode::kTakeoff) = GasVector(uniform(1e-5, 5e-5), 4.0 * scale,
                                                uniform(1e-4, 6e-4), uniform(0.02, 0.04));
    f.mode_rates(LtoMode::kClimbout) = GasVector(uniform(1e-5, 3e-5), 3.2 * scale,
                                                 uniform(1e-4, 3e-4), uniform(0.01, 0.02));
    f.mode_rates(LtoMode::kApproach) = GasVector(uniform(1e-5, 2e-5), 1.1 * scale,
                                                 uniform(5e-4, 1e-3), uniform(0.002, 0.004));
    f.mode_rates(LtoMode::kIdle) = GasVector(uniform(1e-4, 3e-4), 0.35 * scale,
                                             uniform(2e-3, 4e-3), uniform(3e-4, 6e-4));
    uids.push_back(f.engine_uid);
    c.engines.push_back(std::move(f));
    c.engine_codes.push_back({fmt::format("E{:04d}", e), fmt::format("SYNJET {}", uids.back())});
  }

  // Tails: type k = i % types; the first tail of each type always gets an
  // exact registry entry so every type has a popular engine.
  const char* const kVariants[] = {"SYN-{:02d}", "syn {:02d}", "BSYN{:02d}", "SYN/{:02d}",
                                   "Boeing SYN-{:d}"};
  std::vector<std::string> tails;
  for (std::size_t i = 0; i < spec.tails; ++i) {
    const std::size_t k = i % spec.airframe_types;
    ingest::AirframeRecord a;
    a.tail_number = fmt::format("N{:04d}S", i);
    a.raw_type_designator = fmt::format(fmt::runtime(kVariants[pick(std::size(kVariants))]), k);
    a.seat_count = static_cast<int>(50 + pick(180));
    a.engine_count = pick(10) == 0 ? 4 : 2;
    tails.push_back(a.tail_number);
    const std::size_t engine = 2 * k + (pick(10) < 7 ? 0 : 1);
    const std::string& uid = uids[engine];
    const bool first_of_type = i < spec.airframe_types;
    switch (first_of_type ? 0 : pick(6)) {
      case 0: c.registry.push_back({a.tail_number, uid}); break;
      case 1: c.registry.push_back({a.tail_number, fmt::format("{} MOD", uid)}); break;
      case 2: c.registry.push_back({a.tail_number, fmt::format("E{:04d}", engine)}); break;
      case 3: c.registry.push_back({a.tail_number, "UNKNOWN TURBOFAN"}); break;
      case 4: break;  // no registry row
      default: c.registry.push_back({a.tail_number, fmt::format("{}", uid)}); break;
    }
    c.b43.push_back(std::move(a));
  }

  std::vector<std::string> airports;
  for (std::size_t i = 0; i < spec.airports; ++i) {
    airports.push_back(fmt::format("X{}{}", static_cast<char>('A' + i / 26),
                                   static_cast<char>('A' + i % 26)));
  }
  std::vector<std::string> carriers;
  for (std::size_t i = 0; i < spec.carriers; ++i) {
    carriers.push_back(fmt::format("C{}", static_cast<char>('A' + i)));
  }

  for (std::size_t i = 0; i < spec.flights; ++i) {
    ingest::FlightRecord f;
    f.flight_date = std::chrono::year{2021} / std::chrono::July /
                    std::chrono::day(static_cast<unsigned>(1 + i % 31));
    const std::size_t tail = pick(spec.tails);
    f.carrier_code = carriers[tail % spec.carriers];
    f.flight_number = std::to_string(100 + pick(9000));
    f.tail_number = tails[tail];
    const std::size_t o = pick(spec.airports);
    std::size_t d = pick(spec.airports - 1);
    if (d >= o) ++d;
    f.origin = airports[o];
    f.destination = airports[d];
    f.distance_mi = std::round(uniform(90.0, 2700.0));
    f.air_time_min = std::round(std::clamp(f.distance_mi / 7.6 + uniform(5.0, 25.0), 21.0, 415.0));
    if (pick(20) != 0) {
      f.taxi_in_min = std::round(uniform(2.0, 20.0) * 100.0) / 100.0;
      f.taxi_out_min = std::round(uniform(5.0, 35.0) * 100.0) / 100.0;
    }
    if (spec.missing_tail_every && i % spec.missing_tail_every == 0) {
      f.tail_number.reset();
      ++c.expected_missing_tail;
    } else if (spec.missing_air_time_every && i % spec.missing_air_time_every == 0) {
      f.air_time_min.reset();
      ++c.expected_missing_air_time;
    } else if (spec.unknown_tail_every &&
               i % spec.unknown_tail_every == spec.unknown_tail_every - 1) {
      f.tail_number = fmt::format("N9{:04d}Z", i);
      ++c.expected_unknown_tail;
    }
    c.flights.push_back(std::move(f));
  }
  return c;
}

fs::path write_corpus(const Corpus& c, const fs::path& dir, std::string_view extra_config) {
  fs::create_directories(dir);
  auto emit = [&](std::string_view name, auto&& writer) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    writer(out);
  };
  emit("ontime.csv", [&](auto& o) { ingest::write_ontime(o, c.flights); });
  emit("b43.csv", [&](auto& o) { ingest::write_b43(o, c.b43); });
  emit("tail_registry.csv", [&](auto& o) { ingest::write_tail_registry(o, c.registry); });
  emit("engine_codes.csv", [&](auto& o) { ingest::write_engine_codes(o, c.engine_codes); });
  emit("icao_engines.csv", [&](auto& o) { ingest::write_icao_databank(o, c.engines); });
  emit("bada_ccd.csv", [&](auto& o) { ingest::write_bada_ccd(o, c.profiles); });
  emit("normalization_rules.csv", [&](auto& o) {
    o << "pattern,canonical_type\n";
    for (const auto& [p, t] : c.rules) o << p << ',' << t << '\n';
  });
  emit("family_fallback.csv", [&](auto& o) {
    o << "missing_type,surrogate_type,efficiency_factor\n";
    for (const auto& f : c.fallbacks) o << f.missing << ',' << f.surrogate << ',' << f.factor << '\n';
  });
  const fs::path config = dir / "aeroemit.conf";
  write_text(config, fmt::format(
                         "ontime = ontime.csv\n"
                         "b43 = b43.csv\n"
                         "tail_registry = tail_registry.csv\n"
                         "engine_codes = engine_codes.csv\n"
                         "icao_engines = icao_engines.csv\n"
                         "bada_ccd = bada_ccd.csv\n"
                         "normalization_rules = normalization_rules.csv\n"
                         "family_fallback = family_fallback.csv\n"
                         "output_dir = out\n"
                         "{}",
                         extra_config));
  return config;
}

}  // namespace aeroemit::testing
