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

#include "aeroemit/emissions.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace aeroemit::emissions {
namespace {

// Rounds `part` to the quantum of `whole` (its unit in the last place) and
// clamps it to [0, whole]; whole - result is then exact.
double snap_to_quantum(double part, double whole) {
  if (whole <= 0.0) return 0.0;
  const int exponent = std::max(std::ilogb(whole) - (DBL_MANT_DIG - 1),
                                DBL_MIN_EXP - DBL_MANT_DIG);
  double snapped = std::ldexp(std::nearbyint(std::ldexp(part, -exponent)), exponent);
  return std::clamp(snapped, 0.0, whole);
}

double knot_key(const ingest::CcdKnot& knot, CcdKey key) {
  return key == CcdKey::kDuration ? knot.duration_min : *knot.distance_mi;
}

}  // namespace

double LtoTimes::seconds(LtoMode mode) const {
  switch (mode) {
    case LtoMode::kTakeoff: return takeoff_s;
    case LtoMode::kClimbout: return climbout_s;
    case LtoMode::kApproach: return approach_s;
    case LtoMode::kIdle: return idle_s();
  }
  return 0.0;
}

LtoTimes LtoTimes::with_idle(double idle_s) {
  LtoTimes t;
  t.idle_out_s = idle_s / 2;
  t.idle_in_s = idle_s / 2;
  return t;
}

LtoTimes LtoTimes::from_taxi(std::optional<double> taxi_in_min,
                             std::optional<double> taxi_out_min) {
  if (!taxi_in_min || !taxi_out_min) return standard();
  LtoTimes t;
  t.idle_out_s = *taxi_out_min * 60.0;
  t.idle_in_s = *taxi_in_min * 60.0;
  return t;
}

LtoModeMasses lto_mode_masses(const ingest::EngineLtoFactors& factors,
                              const LtoTimes& times, double engine_multiplier) {
  auto mass = [&](LtoMode mode, double seconds) {
    GasVector v = factors.mode_rates(mode) * seconds;
    return v * engine_multiplier;
  };
  LtoModeMasses m;
  m.takeoff = mass(LtoMode::kTakeoff, times.takeoff_s);
  m.climbout = mass(LtoMode::kClimbout, times.climbout_s);
  m.approach = mass(LtoMode::kApproach, times.approach_s);
  m.idle_out = mass(LtoMode::kIdle, times.idle_out_s);
  m.idle_in = mass(LtoMode::kIdle, times.idle_in_s);
  return m;
}

GasVector lto_emissions(const ingest::EngineLtoFactors& factors,
                        const LtoTimes& times, double engine_multiplier) {
  return lto_mode_masses(factors, times, engine_multiplier).total();
}

double quantize_mass(double kg) { return std::nearbyint(kg / kMassQuantumKg) * kMassQuantumKg; }

GasVector quantize_mass(const GasVector& kg) {
  GasVector out;
  for (Gas gas : kAllGases) out[gas] = quantize_mass(kg[gas]);
  return out;
}

LtoSplit split_lto(const LtoModeMasses& masses) {
  const GasVector total = masses.total();
  const GasVector dest_raw = masses.destination();
  LtoSplit split;
  for (Gas gas : kAllGases) {
    split.destination[gas] = snap_to_quantum(dest_raw[gas], total[gas]);
    split.origin[gas] = total[gas] - split.destination[gas];
  }
  return split;
}

std::string_view range_flag_name(RangeFlag flag) {
  switch (flag) {
    case RangeFlag::kInRange: return "";
    case RangeFlag::kExtrapolatedLow: return "EXTRAPOLATED_LOW";
    case RangeFlag::kExtrapolatedHigh: return "EXTRAPOLATED_HIGH";
  }
  return "?";
}

CcdEstimate ccd_interpolate(const ingest::CcdProfile& profile, double x,
                            double efficiency_factor, CcdKey key) {
  const auto& knots = profile.knots;
  if (knots.size() < 2) {
    throw std::invalid_argument("CCD profile '" + profile.canonical_type +
                                "' needs at least two knots");
  }
  if (key == CcdKey::kDistance && !profile.has_distance_key()) {
    throw std::invalid_argument("CCD profile '" + profile.canonical_type +
                                "' has no distance column");
  }
  CcdEstimate out;
  // First knot whose key is >= x.
  auto it = std::partition_point(knots.begin(), knots.end(), [&](const auto& k) {
    return knot_key(k, key) < x;
  });
  if (it != knots.end() && knot_key(*it, key) == x) {
    out.kg = it->emissions_kg * efficiency_factor;
    return out;
  }
  std::size_t hi = static_cast<std::size_t>(it - knots.begin());
  if (hi == 0) {
    hi = 1;
    out.range = RangeFlag::kExtrapolatedLow;
  } else if (hi == knots.size()) {
    hi = knots.size() - 1;
    out.range = RangeFlag::kExtrapolatedHigh;
  }
  const auto& lower = knots[hi - 1];
  const auto& upper = knots[hi];
  const double x0 = knot_key(lower, key);
  const double t = (x - x0) / (knot_key(upper, key) - x0);
  for (Gas gas : kAllGases) {
    const double y0 = lower.emissions_kg[gas];
    const double y1 = upper.emissions_kg[gas];
    out.kg[gas] = (y0 + (y1 - y0) * t) * efficiency_factor;
    // Extending a steep first segment to very short flights can cross zero.
    if (out.kg[gas] < 0.0) out.kg[gas] = 0.0;
  }
  return out;
}

double Co2eFactors::operator[](Gas gas) const {
  switch (gas) {
    case Gas::kHc: return hc;
    case Gas::kCo2: return co2;
    case Gas::kCo: return co;
    case Gas::kNox: return nox;
  }
  return 0.0;
}

double co2e(const GasVector& v, const Co2eFactors& f) {
  return v.co2() * f.co2 + v.co() * f.co + v.hc() * f.hc + v.nox() * f.nox;
}

EmissionsModel::EmissionsModel(std::span<const ingest::EngineLtoFactors> databank,
                               std::span<const ingest::CcdProfile> profiles,
                               EmissionsSettings settings)
    : settings_(settings) {
  for (const auto& e : databank) engines_.emplace(e.engine_uid, &e);
  for (const auto& p : profiles) profiles_.emplace(p.canonical_type, &p);
}

const ingest::EngineLtoFactors* EmissionsModel::engine(std::string_view uid) const {
  auto it = engines_.find(uid);
  return it == engines_.end() ? nullptr : it->second;
}

const ingest::CcdProfile* EmissionsModel::profile(std::string_view type) const {
  auto it = profiles_.find(type);
  return it == profiles_.end() ? nullptr : it->second;
}

std::optional<EmissionsResult> flight_emissions(const matching::ResolvedFlight& rf,
                                                const EmissionsModel& model) {
  if (!rf.computable() || !rf.flight.air_time_min || rf.seat_count < 1) {
    return std::nullopt;
  }
  const auto* engine = model.engine(rf.engine_uid);
  const auto* profile = model.profile(rf.emissions_type);
  const auto& settings = model.settings();
  if (!engine || !profile) return std::nullopt;
  if (settings.ccd_key == CcdKey::kDistance && !profile->has_distance_key()) {
    return std::nullopt;
  }

  const double engine_multiplier =
      settings.multiplier_mode == EngineMultiplierMode::kPerEngine
          ? static_cast<double>(rf.engine_count)
          : 1.0;

  EmissionsResult r;
  r.times = LtoTimes::from_taxi(rf.flight.taxi_in_min, rf.flight.taxi_out_min);
  const LtoModeMasses modes =
      lto_mode_masses(*engine, r.times, engine_multiplier * rf.efficiency_factor);
  r.lto = quantize_mass(modes.total());
  const GasVector destination = quantize_mass(modes.destination());
  for (Gas gas : kAllGases) {
    // Both terms sit on the mass grid, so the difference is exact.
    r.lto_destination_share[gas] = std::clamp(destination[gas], 0.0, r.lto[gas]);
    r.lto_origin_share[gas] = r.lto[gas] - r.lto_destination_share[gas];
  }

  const double x = settings.ccd_key == CcdKey::kDuration ? *rf.flight.air_time_min
                                                         : rf.flight.distance_mi;
  const CcdEstimate ccd =
      ccd_interpolate(*profile, x, rf.efficiency_factor, settings.ccd_key);
  r.ccd = quantize_mass(ccd.kg);
  r.ccd_range = ccd.range;

  r.lto_co2e_kg = quantize_mass(co2e(r.lto, settings.factors));
  r.ccd_co2e_kg = quantize_mass(co2e(r.ccd, settings.factors));
  r.total_co2e_kg = r.lto_co2e_kg + r.ccd_co2e_kg;
  const double seats = static_cast<double>(rf.seat_count);
  r.per_seat_co2e_kg = r.total_co2e_kg / seats;
  r.per_seat_mile_co2_kg = (r.lto.co2() + r.ccd.co2()) / (seats * rf.flight.distance_mi);
  return r;
}

}  // namespace aeroemit::emissions
