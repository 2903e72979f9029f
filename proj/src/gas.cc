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

#include "aeroemit/gas.h"

#include <algorithm>
#include <cctype>
#include <string>

namespace aeroemit {
namespace {

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return out;
}

}  // namespace

std::string_view gas_name(Gas gas) {
  switch (gas) {
    case Gas::kHc: return "HC";
    case Gas::kCo2: return "CO2";
    case Gas::kCo: return "CO";
    case Gas::kNox: return "NOX";
  }
  return "?";
}

std::string_view gas_column(Gas gas) {
  switch (gas) {
    case Gas::kHc: return "hc";
    case Gas::kCo2: return "co2";
    case Gas::kCo: return "co";
    case Gas::kNox: return "nox";
  }
  return "?";
}

std::optional<Gas> parse_gas(std::string_view text) {
  const std::string key = upper(text);
  for (Gas gas : kAllGases) {
    if (key == gas_name(gas)) return gas;
  }
  return std::nullopt;
}

bool GasVector::non_negative() const {
  return std::all_of(kg_.begin(), kg_.end(), [](double v) { return v >= 0.0; });
}

std::string_view lto_mode_name(LtoMode mode) {
  switch (mode) {
    case LtoMode::kTakeoff: return "TAKEOFF";
    case LtoMode::kClimbout: return "CLIMBOUT";
    case LtoMode::kApproach: return "APPROACH";
    case LtoMode::kIdle: return "IDLE";
  }
  return "?";
}

std::optional<LtoMode> parse_lto_mode(std::string_view text) {
  const std::string key = upper(text);
  if (key == "TAKEOFF" || key == "T/O") return LtoMode::kTakeoff;
  if (key == "CLIMBOUT" || key == "CLIMB" || key == "C/O") {
    return LtoMode::kClimbout;
  }
  if (key == "APPROACH" || key == "APP") return LtoMode::kApproach;
  if (key == "IDLE" || key == "TAXI") return LtoMode::kIdle;
  return std::nullopt;
}

}  // namespace aeroemit
