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

#ifndef AEROEMIT_GAS_H_
#define AEROEMIT_GAS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace aeroemit {

// The four pollutants tracked through both flight cycles. The enumerator
// order is the column order used by every table and report.
enum class Gas : std::size_t { kHc = 0, kCo2 = 1, kCo = 2, kNox = 3 };

inline constexpr std::array<Gas, 4> kAllGases = {Gas::kHc, Gas::kCo2, Gas::kCo,
                                                 Gas::kNox};

// Upper-case wire name: "HC", "CO2", "CO", "NOX".
std::string_view gas_name(Gas gas);
// Lower-case column stem: "hc", "co2", "co", "nox".
std::string_view gas_column(Gas gas);
// Case-insensitive inverse of gas_name(). "NOx" is accepted.
std::optional<Gas> parse_gas(std::string_view text);

// Mass per gas, in kilograms.
class GasVector {
 public:
  constexpr GasVector() = default;
  constexpr GasVector(double hc, double co2, double co, double nox)
      : kg_{hc, co2, co, nox} {}

  constexpr double operator[](Gas gas) const {
    return kg_[static_cast<std::size_t>(gas)];
  }
  constexpr double& operator[](Gas gas) {
    return kg_[static_cast<std::size_t>(gas)];
  }

  constexpr double hc() const { return (*this)[Gas::kHc]; }
  constexpr double co2() const { return (*this)[Gas::kCo2]; }
  constexpr double co() const { return (*this)[Gas::kCo]; }
  constexpr double nox() const { return (*this)[Gas::kNox]; }

  constexpr GasVector& operator+=(const GasVector& other) {
    for (std::size_t i = 0; i < kg_.size(); ++i) kg_[i] += other.kg_[i];
    return *this;
  }
  constexpr GasVector& operator-=(const GasVector& other) {
    for (std::size_t i = 0; i < kg_.size(); ++i) kg_[i] -= other.kg_[i];
    return *this;
  }
  constexpr GasVector& operator*=(double k) {
    for (double& v : kg_) v *= k;
    return *this;
  }

  friend constexpr GasVector operator+(GasVector a, const GasVector& b) {
    return a += b;
  }
  friend constexpr GasVector operator-(GasVector a, const GasVector& b) {
    return a -= b;
  }
  friend constexpr GasVector operator*(GasVector v, double k) { return v *= k; }
  friend constexpr GasVector operator*(double k, GasVector v) { return v *= k; }

  friend constexpr bool operator==(const GasVector&,
                                   const GasVector&) = default;

  // True when every component is >= 0 (NaN fails).
  bool non_negative() const;

 private:
  std::array<double, 4> kg_{};
};

// The four ICAO LTO operating modes, in table order.
enum class LtoMode : std::size_t {
  kTakeoff = 0,
  kClimbout = 1,
  kApproach = 2,
  kIdle = 3
};

inline constexpr std::array<LtoMode, 4> kAllLtoModes = {
    LtoMode::kTakeoff, LtoMode::kClimbout, LtoMode::kApproach, LtoMode::kIdle};

std::string_view lto_mode_name(LtoMode mode);
// Case-insensitive; accepts "TAKEOFF"/"T/O", "CLIMBOUT"/"CLIMB"/"C/O",
// "APPROACH"/"APP", "IDLE"/"TAXI".
std::optional<LtoMode> parse_lto_mode(std::string_view text);

}  // namespace aeroemit

#endif  // AEROEMIT_GAS_H_
