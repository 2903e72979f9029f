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

#ifndef AEROEMIT_MATCHING_H_
#define AEROEMIT_MATCHING_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aeroemit/ingest.h"

// Record linkage from on-time flights to airframe, seat count and certified
// engine. Resolution happens once per tail number; flights share the cached
// result.
namespace aeroemit::matching {

inline constexpr double kDefaultJaccardThreshold = 0.5;
inline constexpr double kMaxEfficiencyFactor = 1.5;

enum class Provenance : std::uint8_t {
  kEngineExact = 1u << 0,
  kEngineJaccard = 1u << 1,
  kEnginePopularFallback = 1u << 2,
  kFamilyFallback = 1u << 3,
  kIncomputable = 1u << 4,
};

class ProvenanceFlags {
 public:
  constexpr ProvenanceFlags() = default;

  constexpr bool has(Provenance p) const {
    return (bits_ & static_cast<std::uint8_t>(p)) != 0;
  }
  constexpr void set(Provenance p) { bits_ |= static_cast<std::uint8_t>(p); }
  constexpr std::uint8_t bits() const { return bits_; }

  // Number of engine-source flags present (0 or 1 on a valid resolution).
  int engine_flag_count() const;

  // "ENGINE_EXACT|FAMILY_FALLBACK" style, in flag order; empty when unset.
  std::string to_string() const;

  friend constexpr bool operator==(ProvenanceFlags, ProvenanceFlags) = default;

 private:
  std::uint8_t bits_ = 0;
};

std::string_view provenance_name(Provenance p);

// Why a flight has no emissions. Checked in declaration order.
enum class IncomputableCause {
  kNone,
  kMissingTail,
  kMissingAirTime,
  kNoAirframeRecord,
  kUnknownAirframeType,
  kNoCcdProfile,
  kNoEngineMatch,
  kMissingFactors,
};

inline constexpr std::array<IncomputableCause, 7> kAllIncomputableCauses = {
    IncomputableCause::kMissingTail,         IncomputableCause::kMissingAirTime,
    IncomputableCause::kNoAirframeRecord,    IncomputableCause::kUnknownAirframeType,
    IncomputableCause::kNoCcdProfile,        IncomputableCause::kNoEngineMatch,
    IncomputableCause::kMissingFactors};

// "MISSING_TAIL", "MISSING_AIR_TIME", ...
std::string_view cause_name(IncomputableCause cause);

// ---------------------------------------------------------------------------
// Token Jaccard matching.

// Sorted, de-duplicated upper-case tokens.
using TokenSet = std::vector<std::string>;

// Splits on every non-alphanumeric character, upper-cases, drops empties and
// collapses duplicates. "PW 4060-3" -> {3, 4060, PW}.
TokenSet tokenize(std::string_view designation);

// |a ∩ b| / |a ∪ b|, and 1.0 when both are empty.
double jaccard_similarity(const TokenSet& a, const TokenSet& b);

struct EngineMatch {
  std::string engine_uid;
  double score = 0.0;

  friend bool operator==(const EngineMatch&, const EngineMatch&) = default;
};

// Tokenized view of the engine databank, built once and reused for every
// tail.
class EngineIndex {
 public:
  EngineIndex() = default;
  explicit EngineIndex(std::span<const ingest::EngineLtoFactors> databank);

  // Best-scoring entry; ties go to the lexicographically smallest uid.
  // std::nullopt when the index is empty or the best score < threshold.
  std::optional<EngineMatch> match(std::string_view designation,
                                   double threshold) const;

  bool contains(std::string_view uid) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::string uid;
    TokenSet tokens;
  };
  std::vector<Entry> entries_;  // sorted by uid
};

std::optional<EngineMatch> match_engine(
    std::string_view faa_designation,
    std::span<const ingest::EngineLtoFactors> databank,
    double threshold = kDefaultJaccardThreshold);

// ---------------------------------------------------------------------------
// Airframe type normalization.

// Upper-case alphanumerics only: "737/800" -> "737800". Rule patterns are
// matched against this form.
std::string compact_designator(std::string_view raw);

struct NormalizationRule {
  std::string pattern;         // ECMAScript regex, full match on the compact form
  std::string canonical_type;  // upper case
};

class NormalizationRuleSet {
 public:
  NormalizationRuleSet() = default;

  // Throws InputError if `pattern` is not a valid regex.
  void add(std::string pattern, std::string canonical_type);

  // Reads `pattern,canonical_type`. Every row must be valid.
  static NormalizationRuleSet load(const std::filesystem::path& path);
  // Built-in rules for common U.S. airline fleet designators.
  static NormalizationRuleSet defaults();

  // A raw designator whose compact form equals the compact form of some
  // canonical type maps to that type directly, which makes normalization
  // idempotent. Otherwise the first matching rule wins.
  std::optional<std::string> normalize(std::string_view raw) const;

  const std::vector<NormalizationRule>& rules() const { return rules_; }

 private:
  std::vector<NormalizationRule> rules_;
  std::vector<std::regex> compiled_;
  std::map<std::string, std::string> canonical_by_compact_;
};

std::optional<std::string> normalize_airframe_type(
    std::string_view raw, const NormalizationRuleSet& rules);

struct FamilyFallback {
  std::string surrogate_type;
  double efficiency_factor = 1.0;

  friend bool operator==(const FamilyFallback&, const FamilyFallback&) = default;
};

// Airframes without their own CCD profile, mapped to the closest family
// member and a multiplier on that member's emissions.
class FamilyFallbackTable {
 public:
  static constexpr double kDefaultEfficiencyFactor = 0.85;

  FamilyFallbackTable() = default;

  // Throws InputError on a duplicate key or a factor outside (0, 1.5].
  void add(std::string missing_type, std::string surrogate_type,
           double efficiency_factor);

  // Reads `missing_type,surrogate_type,efficiency_factor`.
  static FamilyFallbackTable load(const std::filesystem::path& path);
  // 737-8, 737-9, A320NEO, A330-900 and A220 at kDefaultEfficiencyFactor.
  static FamilyFallbackTable defaults();

  const FamilyFallback* find(std::string_view type) const;
  const std::map<std::string, FamilyFallback, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, FamilyFallback, std::less<>> entries_;
};

class PopularEngineTable {
 public:
  const std::string* find(std::string_view canonical_type) const;
  void set(std::string canonical_type, std::string engine_uid);
  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

  // Reads `canonical_type,engine_uid`.
  static PopularEngineTable load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// ---------------------------------------------------------------------------
// Resolution.

// Everything matching learns about one tail number.
struct TailResolution {
  std::string tail_number;
  std::string raw_type_designator;
  std::string canonical_type;
  int seat_count = 0;
  int engine_count = ingest::kDefaultEngineCount;
  std::string engine_uid;
  double engine_match_score = 0.0;
  std::string emissions_type;
  double efficiency_factor = 1.0;
  ProvenanceFlags provenance;
  IncomputableCause cause = IncomputableCause::kNone;
};

struct ResolvedFlight {
  ingest::FlightRecord flight;
  std::string canonical_type;
  int seat_count = 0;
  int engine_count = 0;
  std::string engine_uid;
  // Airframe whose CCD profile is used; differs from canonical_type only
  // under family fallback.
  std::string emissions_type;
  double efficiency_factor = 1.0;
  ProvenanceFlags provenance;
  IncomputableCause cause = IncomputableCause::kNone;

  bool computable() const { return cause == IncomputableCause::kNone; }
  void mark_incomputable(IncomputableCause why) {
    cause = why;
    provenance.set(Provenance::kIncomputable);
  }
};

// Most common engine per airframe type, counting only tails whose engine was
// matched directly (exact or Jaccard). Ties go to the smallest uid.
PopularEngineTable build_popular_engine_table(
    std::span<const TailResolution> fleet);

struct MatchingInputs {
  std::span<const ingest::AirframeRecord> airframes;
  std::span<const ingest::TailEngineRecord> tail_registry;
  std::span<const ingest::EngineCodeRecord> engine_codes;
  std::span<const ingest::EngineLtoFactors> databank;
  std::span<const ingest::CcdProfile> ccd_profiles;
};

struct MatchingConfig {
  NormalizationRuleSet rules = NormalizationRuleSet::defaults();
  FamilyFallbackTable fallback = FamilyFallbackTable::defaults();
  std::optional<PopularEngineTable> popular_override;
  double jaccard_threshold = kDefaultJaccardThreshold;
};

// Immutable after build(); safe to share across threads.
class MatchingTables {
 public:
  // Validates the configuration against the data (throws InputError), then
  // resolves every airframe record.
  static MatchingTables build(const MatchingInputs& inputs,
                              const MatchingConfig& config);

  const TailResolution* find_tail(std::string_view tail) const;
  const std::vector<TailResolution>& tails() const { return tails_; }
  const PopularEngineTable& popular_engines() const { return popular_; }

 private:
  std::vector<TailResolution> tails_;  // sorted by tail number
  PopularEngineTable popular_;
};

// Pure function of its arguments. Failure is encoded in `cause` and the
// INCOMPUTABLE flag.
ResolvedFlight resolve_flight(const ingest::FlightRecord& flight,
                              const MatchingTables& tables);

}  // namespace aeroemit::matching

#endif  // AEROEMIT_MATCHING_H_
