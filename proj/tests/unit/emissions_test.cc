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

#include <cmath>
#include <random>

#include "aeroemit/emissions.h"
#include "doctest.h"
#include "test_support.h"

using namespace aeroemit;
using namespace aeroemit::emissions;
using doctest::Approx;

namespace {

matching::ResolvedFlight dl2441() {
  matching::ResolvedFlight rf;
  rf.flight.carrier_code = "DL";
  rf.flight.tail_number = "N815DN";
  rf.flight.origin = "PHL";
  rf.flight.destination = "ATL";
  rf.flight.air_time_min = 124;
  rf.flight.taxi_in_min = 7.43;
  rf.flight.taxi_out_min = 15.42;
  rf.flight.distance_mi = 666;
  rf.canonical_type = "737-900ER";
  rf.emissions_type = "737-900ER";
  rf.seat_count = 180;
  rf.engine_count = 2;
  rf.engine_uid = "CFM56-7B27E";
  rf.provenance.set(matching::Provenance::kEngineExact);
  return rf;
}

bool within(double actual, double expected, double rel) {
  return std::fabs(actual - expected) <= rel * std::fabs(expected);
}

}  // namespace

TEST_CASE("LTO times") {
  const LtoTimes standard = LtoTimes::standard();
  CHECK(standard.takeoff_s == 42.0);
  CHECK(standard.climbout_s == 132.0);
  CHECK(standard.approach_s == 240.0);
  CHECK(standard.idle_s() == 1560.0);
  const LtoTimes taxi = LtoTimes::from_taxi(7.43, 15.42);
  CHECK(taxi.idle_in_s == 7.43 * 60);
  CHECK(taxi.idle_out_s == 15.42 * 60);
  CHECK(taxi.idle_s() == Approx(22.85 * 60).epsilon(1e-12));
  CHECK(LtoTimes::from_taxi(std::nullopt, 15.42) == standard);
  CHECK(LtoTimes::from_taxi(0.0, 0.0).idle_s() == 0.0);
}

TEST_CASE("LTO emissions: worked example") {
  const GasVector lto = lto_emissions(aeroemit::testing::cfm56_7b27e(),
                                      LtoTimes::from_taxi(7.43, 15.42));
  CHECK(within(lto.hc(), 0.24, 0.01));
  CHECK(within(lto.co2(), 1334.11, 0.01));
  CHECK(within(lto.co(), 4.70, 0.01));
  CHECK(within(lto.nox(), 5.14, 0.01));
  CHECK(within(co2e(lto), 2893.61, 0.01));
}

TEST_CASE("LTO emissions: zero times and a hand sum") {
  LtoTimes zero;
  zero.takeoff_s = zero.climbout_s = zero.approach_s = zero.idle_out_s = zero.idle_in_s = 0;
  CHECK(lto_emissions(aeroemit::testing::cfm56_7b27e(), zero) == GasVector{});

  ingest::EngineLtoFactors e;
  e.mode_rates(LtoMode::kTakeoff)[Gas::kCo2] = 4;
  e.mode_rates(LtoMode::kClimbout)[Gas::kCo2] = 3;
  e.mode_rates(LtoMode::kApproach)[Gas::kCo2] = 1;
  e.mode_rates(LtoMode::kIdle)[Gas::kCo2] = 0.5;
  LtoTimes ten;
  ten.takeoff_s = ten.climbout_s = ten.approach_s = 10;
  ten.idle_out_s = ten.idle_in_s = 5;
  CHECK(lto_emissions(e, ten).co2() == 85.0);
}

TEST_CASE("CCD interpolation on the 737-900ER reference profile") {
  const auto p = aeroemit::testing::b737_900er_profile();
  CHECK(ccd_interpolate(p, 105).kg.co2() == 14300.0);
  const CcdEstimate mid = ccd_interpolate(p, 122);
  CHECK(mid.kg.co2() == 16297.0);
  CHECK(mid.range == RangeFlag::kInRange);
  CHECK(ccd_interpolate(p, 122, 0.0).kg == GasVector{});
  CHECK(ccd_interpolate(p, 124).kg.co2() == Approx(16531.94).epsilon(1e-6));
  for (const auto& k : p.knots) CHECK(ccd_interpolate(p, k.duration_min).kg == k.emissions_kg);
}

TEST_CASE("CCD interpolation outside the table is extrapolated and flagged") {
  const auto p = aeroemit::testing::b737_900er_profile();
  const CcdEstimate low = ccd_interpolate(p, 17);
  CHECK(low.range == RangeFlag::kExtrapolatedLow);
  CHECK(low.kg.co2() == Approx(3114 - 5 * (4626 - 3114) / 10.0));
  const CcdEstimate high = ccd_interpolate(p, 480);
  CHECK(high.range == RangeFlag::kExtrapolatedHigh);
  CHECK(high.kg.co2() == Approx(54250 + 70 * (54250 - 44475) / 70.0));
  // Far below the table the straight-line extension would go negative.
  CHECK(ccd_interpolate(p, 0.5).kg.non_negative());
  CHECK(range_flag_name(RangeFlag::kExtrapolatedHigh) == "EXTRAPOLATED_HIGH");
}

TEST_CASE("CCD interpolation rejects unusable profiles") {
  ingest::CcdProfile one;
  one.knots.push_back({30, std::nullopt, GasVector(1, 2, 3, 4)});
  CHECK_THROWS_AS(ccd_interpolate(one, 30), std::invalid_argument);
  CHECK_THROWS_AS(ccd_interpolate(aeroemit::testing::b737_900er_profile(), 500, 1.0,
                                  CcdKey::kDistance),
                  std::invalid_argument);
}

TEST_CASE("CCD interpolation keyed by distance") {
  ingest::CcdProfile p;
  p.knots.push_back({30, 150.0, GasVector(1, 100, 1, 1)});
  p.knots.push_back({60, 350.0, GasVector(2, 300, 2, 2)});
  CHECK(ccd_interpolate(p, 250, 1.0, CcdKey::kDistance).kg.co2() == 200.0);
  CHECK(ccd_interpolate(p, 45, 1.0, CcdKey::kDuration).kg.co2() == 200.0);
}

TEST_CASE("CO2e") {
  CHECK(co2e(GasVector(0.2429, 1334.11, 4.70, 5.14)) == Approx(2893.61).epsilon(0.001));
  CHECK(co2e(GasVector{}) == 0.0);
  CHECK(co2e(GasVector(0, 100, 0, 0)) == 100.0);
  CHECK(co2e(GasVector(1, 0, 0, 0)) == 84.0);
  CHECK(co2e(GasVector(0, 0, 1, 0)) == 1.57);
  CHECK(co2e(GasVector(0, 0, 0, 1)) == 298.0);
  Co2eFactors custom;
  custom.nox = 0;
  CHECK_FALSE(custom.valid());
  custom.nox = 265;
  CHECK(co2e(GasVector(0, 0, 0, 2), custom) == 530.0);
}

TEST_CASE("flight emissions: DL2441 end to end") {
  const std::vector<ingest::EngineLtoFactors> bank = {aeroemit::testing::cfm56_7b27e()};
  const std::vector<ingest::CcdProfile> profiles = {aeroemit::testing::b737_900er_profile()};
  const EmissionsModel model(bank, profiles);
  const auto r = flight_emissions(dl2441(), model);
  REQUIRE(r);
  CHECK(within(r->lto_co2e_kg, 2893.61, 0.01));
  CHECK(within(r->ccd.co2(), 16564.99, 0.005));
  CHECK(within(r->total_co2e_kg, 43265.46, 0.01));
  CHECK(within(r->per_seat_co2e_kg, 240.36, 0.01));
  CHECK(r->total_co2e_kg == r->lto_co2e_kg + r->ccd_co2e_kg);
  CHECK(r->lto_origin_share + r->lto_destination_share == r->lto);
  CHECK(r->ccd_range == RangeFlag::kInRange);

  SUBCASE("per-engine multiplier doubles LTO only") {
    const EmissionsModel per_engine(bank, profiles,
                                    {Co2eFactors{}, EngineMultiplierMode::kPerEngine});
    const auto d = flight_emissions(dl2441(), per_engine);
    REQUIRE(d);
    for (Gas g : kAllGases) {
      // Reported masses sit on the 2^-16 kg grid.
      CHECK(std::fabs(d->lto[g] - 2.0 * r->lto[g]) <= 2 * kMassQuantumKg);
    }
    CHECK(d->ccd == r->ccd);
  }
  SUBCASE("efficiency factor scales both cycles") {
    auto rf = dl2441();
    rf.efficiency_factor = 0.85;
    rf.provenance.set(matching::Provenance::kFamilyFallback);
    const auto f = flight_emissions(rf, model);
    REQUIRE(f);
    CHECK(std::fabs(f->ccd.co2() - r->ccd.co2() * 0.85) <= kMassQuantumKg);
    CHECK(std::fabs(f->lto.co2() - r->lto.co2() * 0.85) <= kMassQuantumKg);
  }
  SUBCASE("missing engine or profile withholds the result") {
    auto rf = dl2441();
    rf.engine_uid = "NOPE";
    CHECK_FALSE(flight_emissions(rf, model).has_value());
    rf = dl2441();
    rf.emissions_type = "NOPE";
    CHECK_FALSE(flight_emissions(rf, model).has_value());
    rf = dl2441();
    rf.mark_incomputable(matching::IncomputableCause::kMissingTail);
    CHECK_FALSE(flight_emissions(rf, model).has_value());
  }
}

TEST_CASE("flight emissions: unit denominators") {
  // Only take-off CO2 is non-zero: 7 kg over 42 s; the CCD profile is zero.
  ingest::EngineLtoFactors e;
  e.engine_uid = "UNIT";
  e.mode_rates(LtoMode::kTakeoff)[Gas::kCo2] = 7.0 / 42.0;
  ingest::CcdProfile p;
  p.canonical_type = "T";
  p.knots = {{10, std::nullopt, {}}, {100, std::nullopt, {}}};
  const std::vector<ingest::EngineLtoFactors> bank = {e};
  const std::vector<ingest::CcdProfile> profiles = {p};
  const EmissionsModel model(bank, profiles);
  auto rf = dl2441();
  rf.engine_uid = "UNIT";
  rf.emissions_type = "T";
  rf.seat_count = 1;
  rf.flight.distance_mi = 1;
  const auto r = flight_emissions(rf, model);
  REQUIRE(r);
  CHECK(r->per_seat_mile_co2_kg == Approx(7.0).epsilon(1e-9));
}

TEST_CASE("property: LTO monotone in idle and linear in the multiplier") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> idle(0.0, 4000.0);
  std::uniform_real_distribution<double> mult(0.1, 8.0);
  const auto e = aeroemit::testing::cfm56_7b27e();
  for (int i = 0; i < 200; ++i) {
    double a = idle(rng), b = idle(rng);
    if (a > b) std::swap(a, b);
    const GasVector la = lto_emissions(e, LtoTimes::with_idle(a));
    const GasVector lb = lto_emissions(e, LtoTimes::with_idle(b));
    for (Gas g : kAllGases) CHECK(la[g] <= lb[g]);

    const double m = mult(rng);
    const GasVector one = lto_emissions(e, LtoTimes::with_idle(a), m);
    const GasVector two = lto_emissions(e, LtoTimes::with_idle(a), 2 * m);
    CHECK(two == one * 2.0);
  }
}

TEST_CASE("property: CCD continuity and bracketing") {
  const auto p = aeroemit::testing::b737_900er_profile();
  for (const auto& k : p.knots) {
    for (double eps : {1e-3, 1e-6, 1e-9}) {
      for (double side : {-1.0, 1.0}) {
        const GasVector near = ccd_interpolate(p, k.duration_min + side * eps).kg;
        for (Gas g : kAllGases) {
          CHECK(near[g] == Approx(k.emissions_kg[g]).epsilon(eps * 10));
        }
      }
    }
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x(22, 410);
  for (int i = 0; i < 500; ++i) {
    const double d = x(rng);
    const GasVector v = ccd_interpolate(p, d).kg;
    auto hi = std::find_if(p.knots.begin(), p.knots.end(),
                           [&](const auto& k) { return k.duration_min >= d; });
    auto lo = hi == p.knots.begin() ? hi : hi - 1;
    for (Gas g : kAllGases) {
      CHECK(v[g] >= lo->emissions_kg[g]);
      CHECK(v[g] <= hi->emissions_kg[g]);
    }
  }
}

TEST_CASE("mass quantization") {
  CHECK(quantize_mass(1.0) == 1.0);
  CHECK(quantize_mass(0x1p-17) == 0.0);  // ties to even
  CHECK(quantize_mass(3 * 0x1p-17) == 0x1p-15);
  CHECK(std::fabs(quantize_mass(1334.1132) - 1334.1132) <= kMassQuantumKg / 2);
}

TEST_CASE("property: split reproduces the LTO vector exactly") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> taxi(0.0, 60.0);
  const auto e = aeroemit::testing::cfm56_7b27e();
  for (int i = 0; i < 2000; ++i) {
    const LtoModeMasses m = lto_mode_masses(e, LtoTimes::from_taxi(taxi(rng), taxi(rng)),
                                            std::uniform_real_distribution<double>(0.5, 4)(rng));
    const LtoSplit s = split_lto(m);
    CHECK(s.origin + s.destination == m.total());
    CHECK(s.origin.non_negative());
    CHECK(s.destination.non_negative());
  }
}
