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

#ifndef AEROEMIT_INGEST_H_
#define AEROEMIT_INGEST_H_

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aeroemit/gas.h"

// Loaders for the six input tables. Every table is a comma-delimited file
// with a fixed header; an empty field means "absent". Malformed rows are
// rejected and reported, never fatal. A header mismatch, an unreadable file
// or a duplicated primary key throws InputError.
namespace aeroemit::ingest {

inline constexpr std::array<std::string_view, 10> kOntimeHeader = {
    "flight_date", "carrier",     "flight_number", "tail_number",
    "origin",      "dest",        "air_time_min",  "taxi_in_min",
    "taxi_out_min", "distance_mi"};
inline constexpr std::array<std::string_view, 4> kB43Header = {
    "tail_number", "type_designator", "seat_count", "engine_count"};
inline constexpr std::array<std::string_view, 2> kTailRegistryHeader = {
    "tail_number", "engine_designation"};
inline constexpr std::array<std::string_view, 2> kEngineCodesHeader = {
    "faa_code", "designation"};
inline constexpr std::array<std::string_view, 4> kIcaoEnginesHeader = {
    "engine_uid", "gas", "mode", "rate_kg_per_s"};
inline constexpr std::array<std::string_view, 6> kBadaCcdHeader = {
    "canonical_type", "duration_min", "hc_kg", "co2_kg", "co_kg", "nox_kg"};
// Optional trailing BADA column enabling distance-keyed interpolation.
inline constexpr std::string_view kBadaDistanceColumn = "distance_mi";

inline constexpr int kDefaultEngineCount = 2;

struct Rejection {
  std::size_t line = 0;
  std::string reason;
};

struct IngestReport {
  std::string table;
  std::size_t total_rows = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  // On-time table only: accepted rows lacking a tail number or air time.
  std::size_t flagged_incomputable = 0;
  std::vector<Rejection> rejections;

  void accept() {
    ++total_rows;
    ++accepted;
  }
  void reject(std::size_t line, std::string reason) {
    ++total_rows;
    ++rejected;
    rejections.push_back({line, std::move(reason)});
  }
};

template <typename T>
struct Parsed {
  std::vector<T> rows;
  IngestReport report;
};

struct FlightRecord {
  std::chrono::year_month_day flight_date{};
  std::string carrier_code;
  std::string flight_number;
  std::optional<std::string> tail_number;
  std::string origin;
  std::string destination;
  std::optional<double> air_time_min;
  std::optional<double> taxi_in_min;
  std::optional<double> taxi_out_min;
  double distance_mi = 0.0;

  // Missing tail or air time: retained, but no emissions can be computed.
  bool incomputable() const { return !tail_number || !air_time_min; }

  friend bool operator==(const FlightRecord&, const FlightRecord&) = default;
};

struct AirframeRecord {
  std::string tail_number;
  std::string raw_type_designator;
  std::string canonical_type;  // filled in by matching
  int seat_count = 0;
  int engine_count = kDefaultEngineCount;

  friend bool operator==(const AirframeRecord&,
                         const AirframeRecord&) = default;
};

struct TailEngineRecord {
  std::string tail_number;
  std::string faa_engine_designation;

  friend bool operator==(const TailEngineRecord&,
                         const TailEngineRecord&) = default;
};

struct EngineCodeRecord {
  std::string faa_code;
  std::string designation_text;

  friend bool operator==(const EngineCodeRecord&,
                         const EngineCodeRecord&) = default;
};

// Emission rates (kg/s) of one certified engine for every gas and mode.
struct EngineLtoFactors {
  std::string engine_uid;
  std::array<GasVector, 4> rate_kg_per_s{};  // indexed by LtoMode

  double rate(Gas gas, LtoMode mode) const {
    return rate_kg_per_s[static_cast<std::size_t>(mode)][gas];
  }
  const GasVector& mode_rates(LtoMode mode) const {
    return rate_kg_per_s[static_cast<std::size_t>(mode)];
  }
  GasVector& mode_rates(LtoMode mode) {
    return rate_kg_per_s[static_cast<std::size_t>(mode)];
  }

  friend bool operator==(const EngineLtoFactors&,
                         const EngineLtoFactors&) = default;
};

struct CcdKnot {
  double duration_min = 0.0;
  std::optional<double> distance_mi;
  GasVector emissions_kg;

  friend bool operator==(const CcdKnot&, const CcdKnot&) = default;
};

// Tabulated cruise/climb/descent masses for one airframe, sorted by
// strictly increasing duration.
struct CcdProfile {
  std::string canonical_type;
  std::vector<CcdKnot> knots;

  // All knots carry a distance and distances strictly increase.
  bool has_distance_key() const;

  friend bool operator==(const CcdProfile&, const CcdProfile&) = default;
};

// Canonical form of a tail number: trimmed, upper case.
std::string normalize_tail(std::string_view tail);

// On-time rows keep file order; every other table is sorted by its key.
Parsed<FlightRecord> parse_ontime(const std::filesystem::path& path);
Parsed<AirframeRecord> parse_b43(const std::filesystem::path& path);
Parsed<TailEngineRecord> parse_tail_registry(const std::filesystem::path& path);
Parsed<EngineCodeRecord> parse_engine_codes(const std::filesystem::path& path);
Parsed<EngineLtoFactors> parse_icao_databank(const std::filesystem::path& path);
Parsed<CcdProfile> parse_bada_ccd(const std::filesystem::path& path);

// Serializers emitting exactly the schema the parsers accept. Doubles are
// written in shortest round-trip form.
void write_ontime(std::ostream& out, std::span<const FlightRecord> rows);
void write_b43(std::ostream& out, std::span<const AirframeRecord> rows);
void write_tail_registry(std::ostream& out,
                         std::span<const TailEngineRecord> rows);
void write_engine_codes(std::ostream& out,
                        std::span<const EngineCodeRecord> rows);
void write_icao_databank(std::ostream& out,
                         std::span<const EngineLtoFactors> rows);
void write_bada_ccd(std::ostream& out, std::span<const CcdProfile> rows);

std::string format_date(const std::chrono::year_month_day& date);
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);

}  // namespace aeroemit::ingest

#endif  // AEROEMIT_INGEST_H_
