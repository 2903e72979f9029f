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

#ifndef AEROEMIT_EMISSIONS_H_
#define AEROEMIT_EMISSIONS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "aeroemit/gas.h"
#include "aeroemit/ingest.h"
#include "aeroemit/matching.h"

namespace aeroemit::emissions {

// Time in each LTO mode, in seconds. Take-off, climb-out and approach use
// the ICAO standard durations; idle comes from the flight's taxi times when
// both are known, otherwise the 26 minute standard split evenly between
// origin (taxi-out) and destination (taxi-in).
struct LtoTimes {
  static constexpr double kTakeoffS = 42.0;
  static constexpr double kClimboutS = 132.0;
  static constexpr double kApproachS = 240.0;
  static constexpr double kIdleS = 1560.0;

  double takeoff_s = kTakeoffS;
  double climbout_s = kClimboutS;
  double approach_s = kApproachS;
  double idle_out_s = kIdleS / 2;
  double idle_in_s = kIdleS / 2;

  double idle_s() const { return idle_out_s + idle_in_s; }
  double seconds(LtoMode mode) const;

  static LtoTimes standard() { return {}; }
  // Standard modes with `idle_s` seconds of idle, split evenly.
  static LtoTimes with_idle(double idle_s);
  static LtoTimes from_taxi(std::optional<double> taxi_in_min,
                            std::optional<double> taxi_out_min);

  friend bool operator==(const LtoTimes&, const LtoTimes&) = default;
};

// Per-mode LTO masses. Idle is kept as its taxi-out and taxi-in parts so
// the origin/destination split needs no re-derivation.
struct LtoModeMasses {
  GasVector takeoff;
  GasVector climbout;
  GasVector approach;
  GasVector idle_out;
  GasVector idle_in;

  GasVector origin() const { return takeoff + climbout + idle_out; }
  GasVector destination() const { return approach + idle_in; }
  GasVector total() const { return origin() + destination(); }
};

LtoModeMasses lto_mode_masses(const ingest::EngineLtoFactors& factors,
                              const LtoTimes& times, double engine_multiplier = 1.0);

// Σ over modes of rate × time, scaled by engine_multiplier.
GasVector lto_emissions(const ingest::EngineLtoFactors& factors,
                        const LtoTimes& times, double engine_multiplier = 1.0);

struct LtoSplit {
  GasVector origin;
  GasVector destination;
};

// Origin gets take-off, climb-out and taxi-out idle; destination gets
// approach and taxi-in idle. The destination share is snapped to the unit
// in the last place of the total, so origin + destination reproduces
// masses.total() exactly.
LtoSplit split_lto(const LtoModeMasses& masses);

// Per-flight masses are reported on a 2^-16 kg grid. Any sum of grid values
// below 2^37 kg (about 1.4e11 kg) is exact in a double, so totals do not
// depend on how flights are grouped or ordered.
inline constexpr double kMassQuantumKg = 0x1p-16;

double quantize_mass(double kg);
GasVector quantize_mass(const GasVector& kg);

enum class CcdKey { kDuration, kDistance };

enum class RangeFlag { kInRange, kExtrapolatedLow, kExtrapolatedHigh };

std::string_view range_flag_name(RangeFlag flag);

struct CcdEstimate {
  GasVector kg;
  RangeFlag range = RangeFlag::kInRange;
};

// Two-point linear interpolation between the knots bracketing `x`, scaled
// by efficiency_factor. A knot abscissa returns the tabulated masses
// exactly. Outside the table the end segment is extended linearly and the
// result is flagged. Throws std::invalid_argument for a profile with fewer
// than two knots, or for kDistance on a profile without distance keys.
CcdEstimate ccd_interpolate(const ingest::CcdProfile& profile, double x,
                            double efficiency_factor = 1.0,
                            CcdKey key = CcdKey::kDuration);

// Global-warming multipliers used to express every gas as CO2.
struct Co2eFactors {
  double co2 = 1.0;
  double co = 1.57;
  double hc = 84.0;
  double nox = 298.0;

  double operator[](Gas gas) const;
  bool valid() const { return co2 > 0 && co > 0 && hc > 0 && nox > 0; }
};

double co2e(const GasVector& v, const Co2eFactors& f = {});

enum class EngineMultiplierMode {
  // ICAO rates taken as aircraft-level: multiplier 1.
  kAircraftLevel,
  // Rates multiplied by the airframe's engine count.
  kPerEngine,
};

struct EmissionsSettings {
  Co2eFactors factors;
  EngineMultiplierMode multiplier_mode = EngineMultiplierMode::kAircraftLevel;
  CcdKey ccd_key = CcdKey::kDuration;
};

struct EmissionsResult {
  GasVector lto;
  GasVector ccd;
  GasVector lto_origin_share;
  GasVector lto_destination_share;
  double lto_co2e_kg = 0.0;
  double ccd_co2e_kg = 0.0;
  double total_co2e_kg = 0.0;
  double per_seat_co2e_kg = 0.0;
  double per_seat_mile_co2_kg = 0.0;
  RangeFlag ccd_range = RangeFlag::kInRange;
  LtoTimes times;
};

// Lookup tables for the per-flight computation. Holds views; the databank
// and profiles must outlive it.
class EmissionsModel {
 public:
  EmissionsModel(std::span<const ingest::EngineLtoFactors> databank,
                 std::span<const ingest::CcdProfile> profiles,
                 EmissionsSettings settings = {});

  const ingest::EngineLtoFactors* engine(std::string_view uid) const;
  const ingest::CcdProfile* profile(std::string_view type) const;
  const EmissionsSettings& settings() const { return settings_; }

 private:
  std::map<std::string, const ingest::EngineLtoFactors*, std::less<>> engines_;
  std::map<std::string, const ingest::CcdProfile*, std::less<>> profiles_;
  EmissionsSettings settings_;
};

// LTO with the flight's taxi times, CCD at its air time (or distance),
// CO2e per cycle and in total, per-seat intensities and the airport split.
// Masses and CO2e values are quantized with quantize_mass.
// Returns std::nullopt when the flight is not computable or its engine or
// CCD profile is missing from the model.
std::optional<EmissionsResult> flight_emissions(const matching::ResolvedFlight& rf,
                                                const EmissionsModel& model);

}  // namespace aeroemit::emissions

#endif  // AEROEMIT_EMISSIONS_H_
