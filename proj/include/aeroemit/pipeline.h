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

#ifndef AEROEMIT_PIPELINE_H_
#define AEROEMIT_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aeroemit/aggregation.h"
#include "aeroemit/emissions.h"
#include "aeroemit/ingest.h"
#include "aeroemit/matching.h"

namespace aeroemit::pipeline {

// Environment variable consulted when no --config is given.
inline constexpr std::string_view kConfigEnvVar = "AEROEMIT_CONFIG";

// Run configuration, read from a `key = value` text file. '#' starts a
// comment. Relative paths are resolved against the config file's directory.
struct RunConfig {
  std::filesystem::path ontime;
  std::filesystem::path b43;
  std::filesystem::path tail_registry;
  std::filesystem::path engine_codes;
  std::filesystem::path icao_engines;
  std::filesystem::path bada_ccd;
  std::filesystem::path normalization_rules;
  std::filesystem::path family_fallback;
  std::optional<std::filesystem::path> popular_engine_override;
  std::filesystem::path output_dir;

  emissions::Co2eFactors co2e_factors;
  double jaccard_threshold = matching::kDefaultJaccardThreshold;
  emissions::EngineMultiplierMode engine_multiplier =
      emissions::EngineMultiplierMode::kAircraftLevel;
  emissions::CcdKey interpolation_key = emissions::CcdKey::kDuration;
  std::optional<aggregation::UnepConfig> unep;
  std::optional<unsigned> threads;

  // Throws InputError on unknown keys, missing required keys or values
  // that do not parse or fall outside their documented range.
  static RunConfig parse(std::string_view text, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);

  // Throws InputError naming the first input path that does not exist.
  void check_paths() const;
};

struct Datasets {
  ingest::Parsed<ingest::FlightRecord> ontime;
  ingest::Parsed<ingest::AirframeRecord> b43;
  ingest::Parsed<ingest::TailEngineRecord> tail_registry;
  ingest::Parsed<ingest::EngineCodeRecord> engine_codes;
  ingest::Parsed<ingest::EngineLtoFactors> icao_engines;
  ingest::Parsed<ingest::CcdProfile> bada_ccd;

  std::vector<const ingest::IngestReport*> reports() const;
};

// Parses the six tables, concurrently when threads > 1.
Datasets load_datasets(const RunConfig& config, unsigned threads = 1);

matching::MatchingConfig matching_config(const RunConfig& config);
matching::MatchingTables build_tables(const Datasets& data, const RunConfig& config);

// Resolves (and, when `model` is given, computes) every flight on a pool of
// `threads` workers. Output order equals input order and the per-flight
// values do not depend on the worker count.
std::vector<aggregation::FlightOutcome> process_flights(
    std::span<const ingest::FlightRecord> flights,
    const matching::MatchingTables& tables, const emissions::EmissionsModel* model,
    unsigned threads);

struct CoverageReport {
  std::size_t total_flights = 0;
  std::size_t computed_flights = 0;
  std::map<matching::IncomputableCause, std::size_t> causes;
  std::size_t engine_exact = 0;
  std::size_t engine_jaccard = 0;
  std::size_t engine_popular_fallback = 0;
  std::size_t family_fallback = 0;
  std::size_t ccd_extrapolated_low = 0;
  std::size_t ccd_extrapolated_high = 0;
  std::vector<ingest::IngestReport> ingest;

  // computed / total; 0 for an empty flight table.
  double coverage() const;
  std::size_t cause_count(matching::IncomputableCause cause) const;

  std::string to_json() const;
  static CoverageReport from_json(std::string_view text);
  // Plain-text rendering for terminals.
  std::string to_text() const;
};

// A flight counts as computed when it has emissions or, for a dry run
// (`dry_run`), when resolution succeeded.
CoverageReport coverage_report(std::span<const aggregation::FlightOutcome> outcomes,
                               const Datasets& data, bool dry_run);

struct RunResult {
  std::vector<aggregation::FlightOutcome> outcomes;
  CoverageReport coverage;
};

// Parse + resolve, no emissions.
CoverageReport validate(const RunConfig& config, unsigned threads);
// Full pipeline; writes every output file into config.output_dir.
RunResult run(const RunConfig& config, unsigned threads);

// Names of the files produced by run().
inline constexpr std::string_view kFlightEmissionsCsv = "flight_emissions.csv";
inline constexpr std::string_view kIncomputableCsv = "incomputable_flights.csv";
inline constexpr std::string_view kAirlineSummaryCsv = "airline_summary.csv";
inline constexpr std::string_view kAirportLtoCsv = "airport_lto.csv";
inline constexpr std::string_view kGasBreakdownCsv = "gas_breakdown.csv";
inline constexpr std::string_view kScatterCo2eCsv = "scatter_co2e.csv";
inline constexpr std::string_view kScatterSeatMileCsv = "scatter_seat_mile.csv";
inline constexpr std::string_view kRouteSummaryCsv = "route_summary.csv";
inline constexpr std::string_view kAircraftSummaryCsv = "aircraft_summary.csv";
inline constexpr std::string_view kEngineSummaryCsv = "engine_summary.csv";
inline constexpr std::string_view kCoverageJson = "coverage_report.json";

// Writes every output into a staging directory next to `output_dir` and
// moves the files into place only after all of them were written. On any
// failure the staging directory is removed and nothing is moved.
void write_outputs(const RunResult& result, const RunConfig& config);

void write_flight_emissions(std::ostream& out,
                            std::span<const aggregation::FlightOutcome> outcomes);
void write_incomputable(std::ostream& out,
                        std::span<const aggregation::FlightOutcome> outcomes);

}  // namespace aeroemit::pipeline

#endif  // AEROEMIT_PIPELINE_H_
