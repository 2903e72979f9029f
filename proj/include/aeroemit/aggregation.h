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

#ifndef AEROEMIT_AGGREGATION_H_
#define AEROEMIT_AGGREGATION_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "aeroemit/emissions.h"
#include "aeroemit/matching.h"

// System-wide roll-ups of per-flight results. All mass sums are exact
// (ExactSum), so every total is independent of input order and grouping.
namespace aeroemit::aggregation {

using emissions::split_lto;

// One flight as it leaves the compute stage.
struct FlightOutcome {
  matching::ResolvedFlight resolved;
  std::optional<emissions::EmissionsResult> emissions;
};

// Emissions and seat-mile intensity for one operating carrier.
struct AirlineSummary {
  std::string carrier_code;
  std::size_t total_flights = 0;
  std::size_t emission_flights = 0;
  long long total_seats = 0;
  GasVector lto_kg;
  GasVector ccd_kg;
  double total_co2_kg = 0.0;
  double total_co2e_kg = 0.0;
  double seat_miles = 0.0;
  // Absent when the carrier has no emission flights.
  std::optional<double> co2_per_seat_mile;
  std::optional<double> co2e_per_seat_mile;
};

// Sorted by total_flights descending, then carrier code.
std::vector<AirlineSummary> aggregate_airlines(std::span<const FlightOutcome> results);

struct AirportLtoSummary {
  std::string airport;
  std::size_t departures = 0;
  std::size_t arrivals = 0;
  GasVector lto_kg;
  double lto_co2e_kg = 0.0;
};

// LTO mass attributed to each airport through the origin/destination split.
// Sorted by lto_co2e_kg descending, then code.
std::vector<AirportLtoSummary> aggregate_airports(
    std::span<const FlightOutcome> results,
    const emissions::Co2eFactors& factors = {});

enum class Cycle { kLto, kCcd };

struct GasBreakdown {
  Cycle cycle = Cycle::kLto;
  GasVector raw_kg;
  GasVector co2e_kg;  // raw_kg[g] * factor[g]
};

std::pair<GasBreakdown, GasBreakdown> gas_breakdowns(
    std::span<const FlightOutcome> results,
    const emissions::Co2eFactors& factors = {});

// Short/long-haul CO2-per-seat-mile step function. The constants are user
// configuration; nothing is built in.
struct UnepConfig {
  double short_haul_co2_per_seat_mile = 0.0;
  double long_haul_co2_per_seat_mile = 0.0;
  double cutoff_mi = 0.0;
};

// Short constant below the cutoff, long constant at or above it;
// std::nullopt without a config.
std::optional<double> unep_baseline(double distance_mi,
                                    const std::optional<UnepConfig>& config);

struct ScatterPoint {
  double distance_mi = 0.0;
  double value = 0.0;  // CO2e kg or CO2 kg per seat-mile
  std::string canonical_type;
  std::string engine_uid;
  std::string carrier_code;
  std::optional<double> baseline;  // seat-mile variant only
};

struct ScatterDatasets {
  std::vector<ScatterPoint> co2e_vs_distance;
  std::vector<ScatterPoint> seat_mile_vs_distance;
};

// One point per computed flight, in input order.
ScatterDatasets scatter_datasets(std::span<const FlightOutcome> results,
                                 const std::optional<UnepConfig>& unep = std::nullopt);

enum class GroupKey { kRoute, kAirframe, kEngine };

struct GroupSummary {
  std::string key;
  std::size_t flights = 0;
  GasVector lto_kg;
  GasVector ccd_kg;
  double total_co2e_kg = 0.0;
  std::optional<double> co2_per_seat_mile;
};

// Computed flights grouped by "ORIGIN-DEST", canonical airframe type or
// engine uid. Sorted by total_co2e_kg descending, then key.
std::vector<GroupSummary> aggregate_groups(std::span<const FlightOutcome> results,
                                           GroupKey key);

// CSV writers. Masses are written with 2 decimals, ratios with 6.
void write_airline_summary(std::ostream& out, std::span<const AirlineSummary> rows);
void write_airport_lto(std::ostream& out, std::span<const AirportLtoSummary> rows);
void write_gas_breakdown(std::ostream& out, const GasBreakdown& lto,
                         const GasBreakdown& ccd);
void write_scatter_co2e(std::ostream& out, std::span<const ScatterPoint> rows);
void write_scatter_seat_mile(std::ostream& out, std::span<const ScatterPoint> rows,
                             bool with_baseline);
void write_group_summary(std::ostream& out, std::string_view key_column,
                         std::span<const GroupSummary> rows);

}  // namespace aeroemit::aggregation

#endif  // AEROEMIT_AGGREGATION_H_
