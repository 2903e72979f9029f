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

#include "aeroemit/matching.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "aeroemit/csv.h"
#include "aeroemit/errors.h"

namespace aeroemit::matching {
namespace {

std::string upper_trim(std::string_view text) {
  std::string out(csv::trim(text));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return out;
}

bool is_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

csv::Table load_config_table(const std::filesystem::path& path,
                             std::string_view name,
                             std::span<const std::string_view> header) {
  csv::Table table = csv::read(path, name);
  csv::require_header(table, name, header);
  for (const auto& row : table.rows) {
    if (!row.error.empty() || row.fields.size() != header.size()) {
      throw InputError(fmt::format("{}: {}:{}: expected {} fields", name,
                                   path.string(), row.line, header.size()));
    }
  }
  return table;
}

// Built-in normalization rules. Patterns see the compact designator
// (upper-case alphanumerics only).
constexpr std::pair<std::string_view, std::string_view> kDefaultRules[] = {
    {"(B|BOEING)?737(MAX)?8|B38M", "737-8"},
    {"(B|BOEING)?737(MAX)?9|B39M", "737-9"},
    {"(B|BOEING)?737(700|7NG|7[0-9]{2}W?)|B73G", "737-700"},
    {"(B|BOEING)?737(800|8NG|8[0-9]{2}W?)|B738", "737-800"},
    {"(B|BOEING)?73(7900ER|79ER|9ER)", "737-900ER"},
    {"(B|BOEING)?737(900|9NG|9[0-9]{2})|B739", "737-900"},
    {"(B|BOEING|MD)?717(200|2[0-9]{2})?|B712", "717-200"},
    {"(B|BOEING)?757(200|2[0-9]{2}|2)|B752", "757-200"},
    {"(B|BOEING)?757(300|3[0-9]{2}|3)|B753", "757-300"},
    {"(B|BOEING)?767(300|3[0-9]{2}|3)(ER)?|B763", "767-300"},
    {"(B|BOEING)?767(400|4[0-9]{2}|4)(ER)?|B764", "767-400"},
    {"(B|BOEING)?777(200|2[0-9]{2}|2)(ER|LR)?|B772", "777-200"},
    {"(B|BOEING)?777(300|3[0-9]{2}|3)(ER)?|B77W|B773", "777-300"},
    {"(B|BOEING)?787(8|800)|B788", "787-8"},
    {"(B|BOEING)?787(9|900)|B789", "787-9"},
    {"(B|BOEING)?787(10|1000)|B78X", "787-10"},
    {"(AIRBUS)?A?319(100|1[0-9]{2})?", "A319-100"},
    {"(AIRBUS)?A?320(NEO|2[0-9]{2}N)|A20N", "A320NEO"},
    {"(AIRBUS)?A?320(200|2[0-9]{2})?", "A320-200"},
    {"(AIRBUS)?A?321(200|2[0-9]{2})?", "A321-200"},
    {"(AIRBUS)?A?330(200|2[0-9]{2})|A332", "A330-200"},
    {"(AIRBUS)?A?330(300|3[0-9]{2})|A333", "A330-300"},
    {"(AIRBUS)?A?330(900|9[0-9]{2}|900NEO|NEO)|A339", "A330-900"},
    {"(AIRBUS)?A220(100|300|[13][0-9]{2})?|BD500(1A1[01])?|CS[13]00|BCS[13]",
     "A220"},
    {"(EMB|EMBRAER)?(ERJ|E)?170(100)?(LR|SU|SE|STD)?|E170", "E170"},
    {"(EMB|EMBRAER)?(ERJ|E)?(175|170200)(LR|SU|SC)?|E75[LS]", "E175"},
    {"(EMB|EMBRAER)?(ERJ|E)?190(100)?(LR|AR|IGW)?|E190", "E190"},
    {"(EMB|EMBRAER)?(ERJ|E)?145(LR|XR|EP|ER)?|E145", "ERJ-145"},
    {"(BOMBARDIER)?CRJ(2|200)(LR|ER)?|CL6002B19|CRJ2", "CRJ-200"},
    {"(BOMBARDIER)?CRJ(7|700)(LR|ER)?|CL6002C1[01]", "CRJ-700"},
    {"(BOMBARDIER)?CRJ(9|900)(LR|ER)?|CL6002D2[45]", "CRJ-900"},
};

// Missing airframe -> closest family member with its own CCD profile.
constexpr std::pair<std::string_view, std::string_view> kDefaultFallbacks[] = {
    {"737-8", "737-800"},   {"737-9", "737-900"},    {"A320NEO", "A320-200"},
    {"A330-900", "A330-300"}, {"A220", "A320-200"},
};

}  // namespace

int ProvenanceFlags::engine_flag_count() const {
  return static_cast<int>(has(Provenance::kEngineExact)) +
         static_cast<int>(has(Provenance::kEngineJaccard)) +
         static_cast<int>(has(Provenance::kEnginePopularFallback));
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kEngineExact: return "ENGINE_EXACT";
    case Provenance::kEngineJaccard: return "ENGINE_JACCARD";
    case Provenance::kEnginePopularFallback: return "ENGINE_POPULAR_FALLBACK";
    case Provenance::kFamilyFallback: return "FAMILY_FALLBACK";
    case Provenance::kIncomputable: return "INCOMPUTABLE";
  }
  return "?";
}

std::string ProvenanceFlags::to_string() const {
  static constexpr Provenance kOrder[] = {
      Provenance::kEngineExact, Provenance::kEngineJaccard,
      Provenance::kEnginePopularFallback, Provenance::kFamilyFallback,
      Provenance::kIncomputable};
  std::string out;
  for (Provenance p : kOrder) {
    if (!has(p)) continue;
    if (!out.empty()) out += '|';
    out += provenance_name(p);
  }
  return out;
}

std::string_view cause_name(IncomputableCause cause) {
  switch (cause) {
    case IncomputableCause::kNone: return "NONE";
    case IncomputableCause::kMissingTail: return "MISSING_TAIL";
    case IncomputableCause::kMissingAirTime: return "MISSING_AIR_TIME";
    case IncomputableCause::kNoAirframeRecord: return "NO_AIRFRAME_RECORD";
    case IncomputableCause::kUnknownAirframeType: return "UNKNOWN_AIRFRAME_TYPE";
    case IncomputableCause::kNoCcdProfile: return "NO_CCD_PROFILE";
    case IncomputableCause::kNoEngineMatch: return "NO_ENGINE_MATCH";
    case IncomputableCause::kMissingFactors: return "MISSING_FACTORS";
  }
  return "?";
}

TokenSet tokenize(std::string_view designation) {
  TokenSet tokens;
  std::string current;
  for (char c : designation) {
    if (is_alnum(c)) {
      current.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

double jaccard_similarity(const TokenSet& a, const TokenSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) {
      ++common;
      ++ia;
      ++ib;
    } else if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  const std::size_t unioned = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(unioned);
}

EngineIndex::EngineIndex(std::span<const ingest::EngineLtoFactors> databank) {
  entries_.reserve(databank.size());
  for (const auto& engine : databank) {
    entries_.push_back({engine.engine_uid, tokenize(engine.engine_uid)});
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.uid < b.uid; });
}

std::optional<EngineMatch> EngineIndex::match(std::string_view designation,
                                              double threshold) const {
  if (entries_.empty()) return std::nullopt;
  const TokenSet query = tokenize(designation);
  const Entry* best = nullptr;
  double best_score = -1.0;
  // entries_ is uid-sorted, so a strict '>' keeps the smallest uid on ties.
  for (const Entry& e : entries_) {
    const double score = jaccard_similarity(query, e.tokens);
    if (score > best_score) {
      best_score = score;
      best = &e;
    }
  }
  if (best_score < threshold) return std::nullopt;
  return EngineMatch{best->uid, best_score};
}

bool EngineIndex::contains(std::string_view uid) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), uid,
      [](const Entry& e, std::string_view key) { return e.uid < key; });
  return it != entries_.end() && it->uid == uid;
}

std::optional<EngineMatch> match_engine(
    std::string_view faa_designation,
    std::span<const ingest::EngineLtoFactors> databank, double threshold) {
  return EngineIndex(databank).match(faa_designation, threshold);
}

std::string compact_designator(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (is_alnum(c)) {
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

void NormalizationRuleSet::add(std::string pattern, std::string canonical_type) {
  canonical_type = upper_trim(canonical_type);
  if (canonical_type.empty()) {
    throw InputError(fmt::format("normalization rule '{}' has an empty canonical type",
                                 pattern));
  }
  try {
    compiled_.emplace_back(pattern, std::regex::ECMAScript | std::regex::optimize);
  } catch (const std::regex_error& e) {
    throw InputError(fmt::format("invalid normalization pattern '{}': {}", pattern,
                                 e.what()));
  }
  canonical_by_compact_.emplace(compact_designator(canonical_type), canonical_type);
  rules_.push_back({std::move(pattern), std::move(canonical_type)});
}

NormalizationRuleSet NormalizationRuleSet::load(const std::filesystem::path& path) {
  static constexpr std::array<std::string_view, 2> kHeader = {"pattern",
                                                              "canonical_type"};
  const csv::Table table = load_config_table(path, "normalization_rules", kHeader);
  NormalizationRuleSet rules;
  for (const auto& row : table.rows) {
    try {
      rules.add(std::string(csv::trim(row.fields[0])), row.fields[1]);
    } catch (const InputError& e) {
      throw InputError(fmt::format("normalization_rules: {}:{}: {}", path.string(),
                                   row.line, e.what()));
    }
  }
  return rules;
}

NormalizationRuleSet NormalizationRuleSet::defaults() {
  NormalizationRuleSet rules;
  for (const auto& [pattern, type] : kDefaultRules) {
    rules.add(std::string(pattern), std::string(type));
  }
  return rules;
}

std::optional<std::string> NormalizationRuleSet::normalize(std::string_view raw) const {
  const std::string key = compact_designator(raw);
  if (key.empty()) return std::nullopt;
  if (auto it = canonical_by_compact_.find(key); it != canonical_by_compact_.end()) {
    return it->second;
  }
  for (std::size_t i = 0; i < compiled_.size(); ++i) {
    if (std::regex_match(key, compiled_[i])) return rules_[i].canonical_type;
  }
  return std::nullopt;
}

std::optional<std::string> normalize_airframe_type(std::string_view raw,
                                                   const NormalizationRuleSet& rules) {
  return rules.normalize(raw);
}

void FamilyFallbackTable::add(std::string missing_type, std::string surrogate_type,
                              double efficiency_factor) {
  missing_type = upper_trim(missing_type);
  surrogate_type = upper_trim(surrogate_type);
  if (missing_type.empty() || surrogate_type.empty()) {
    throw InputError("family fallback entries need both a missing and a surrogate type");
  }
  if (!(efficiency_factor > 0.0 && efficiency_factor <= kMaxEfficiencyFactor)) {
    throw InputError(fmt::format(
        "family fallback '{}': efficiency_factor {} outside (0, {}]", missing_type,
        efficiency_factor, kMaxEfficiencyFactor));
  }
  auto [it, fresh] = entries_.emplace(
      missing_type, FamilyFallback{std::move(surrogate_type), efficiency_factor});
  if (!fresh) {
    throw InputError(fmt::format("family fallback '{}' listed twice", it->first));
  }
}

FamilyFallbackTable FamilyFallbackTable::load(const std::filesystem::path& path) {
  static constexpr std::array<std::string_view, 3> kHeader = {
      "missing_type", "surrogate_type", "efficiency_factor"};
  const csv::Table table = load_config_table(path, "family_fallback", kHeader);
  FamilyFallbackTable out;
  for (const auto& row : table.rows) {
    auto factor = csv::parse_double(row.fields[2]);
    try {
      if (!factor) {
        throw InputError(fmt::format("efficiency_factor '{}' is not a number",
                                     row.fields[2]));
      }
      out.add(row.fields[0], row.fields[1], *factor);
    } catch (const InputError& e) {
      throw InputError(fmt::format("family_fallback: {}:{}: {}", path.string(),
                                   row.line, e.what()));
    }
  }
  return out;
}

FamilyFallbackTable FamilyFallbackTable::defaults() {
  FamilyFallbackTable out;
  for (const auto& [missing, surrogate] : kDefaultFallbacks) {
    out.add(std::string(missing), std::string(surrogate), kDefaultEfficiencyFactor);
  }
  return out;
}

const FamilyFallback* FamilyFallbackTable::find(std::string_view type) const {
  auto it = entries_.find(type);
  return it == entries_.end() ? nullptr : &it->second;
}

const std::string* PopularEngineTable::find(std::string_view canonical_type) const {
  auto it = entries_.find(canonical_type);
  return it == entries_.end() ? nullptr : &it->second;
}

void PopularEngineTable::set(std::string canonical_type, std::string engine_uid) {
  entries_.insert_or_assign(upper_trim(canonical_type), std::move(engine_uid));
}

PopularEngineTable PopularEngineTable::load(const std::filesystem::path& path) {
  static constexpr std::array<std::string_view, 2> kHeader = {"canonical_type",
                                                              "engine_uid"};
  const csv::Table table = load_config_table(path, "popular_engine_override", kHeader);
  PopularEngineTable out;
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    std::string type = upper_trim(row.fields[0]);
    std::string uid(csv::trim(row.fields[1]));
    if (type.empty() || uid.empty() || !seen.insert(type).second) {
      throw InputError(fmt::format(
          "popular_engine_override: {}:{}: empty or duplicate entry", path.string(),
          row.line));
    }
    out.set(std::move(type), std::move(uid));
  }
  return out;
}

PopularEngineTable build_popular_engine_table(std::span<const TailResolution> fleet) {
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& tail : fleet) {
    if (tail.canonical_type.empty() || tail.engine_uid.empty()) continue;
    if (!tail.provenance.has(Provenance::kEngineExact) &&
        !tail.provenance.has(Provenance::kEngineJaccard)) {
      continue;
    }
    ++counts[tail.canonical_type][tail.engine_uid];
  }
  PopularEngineTable table;
  for (const auto& [type, per_uid] : counts) {
    // per_uid iterates in uid order; strict '>' keeps the smallest on ties.
    const std::string* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [uid, n] : per_uid) {
      if (n > best_count) {
        best_count = n;
        best = &uid;
      }
    }
    table.set(type, *best);
  }
  return table;
}

MatchingTables MatchingTables::build(const MatchingInputs& inputs,
                                     const MatchingConfig& config) {
  if (!(config.jaccard_threshold >= 0.0 && config.jaccard_threshold <= 1.0)) {
    throw InputError(fmt::format("jaccard threshold {} outside [0, 1]",
                                 config.jaccard_threshold));
  }
  std::set<std::string, std::less<>> ccd_types;
  for (const auto& p : inputs.ccd_profiles) ccd_types.insert(p.canonical_type);

  for (const auto& [missing, fb] : config.fallback.entries()) {
    if (!ccd_types.contains(fb.surrogate_type)) {
      throw InputError(fmt::format(
          "family fallback '{}' -> '{}': surrogate has no CCD profile", missing,
          fb.surrogate_type));
    }
  }
  for (const auto& rule : config.rules.rules()) {
    if (!ccd_types.contains(rule.canonical_type) &&
        !config.fallback.find(rule.canonical_type)) {
      throw InputError(fmt::format(
          "normalization rule '{}' -> '{}': type has neither a CCD profile nor a "
          "family fallback",
          rule.pattern, rule.canonical_type));
    }
  }

  const EngineIndex index(inputs.databank);
  std::map<std::string, std::string, std::less<>> code_text;
  for (const auto& code : inputs.engine_codes) {
    code_text.emplace(code.faa_code, code.designation_text);
  }
  std::map<std::string, std::string, std::less<>> registry;
  for (const auto& r : inputs.tail_registry) {
    registry.emplace(r.tail_number, r.faa_engine_designation);
  }

  MatchingTables tables;
  tables.tails_.reserve(inputs.airframes.size());
  for (const auto& airframe : inputs.airframes) {
    TailResolution t;
    t.tail_number = airframe.tail_number;
    t.raw_type_designator = airframe.raw_type_designator;
    t.seat_count = airframe.seat_count;
    t.engine_count = airframe.engine_count;

    if (auto canonical = config.rules.normalize(airframe.raw_type_designator)) {
      t.canonical_type = *canonical;
    } else if (std::string raw = upper_trim(airframe.raw_type_designator);
               config.fallback.find(raw)) {
      t.canonical_type = raw;
    } else {
      t.provenance.set(Provenance::kIncomputable);
      t.cause = IncomputableCause::kUnknownAirframeType;
    }

    if (t.cause == IncomputableCause::kNone) {
      if (ccd_types.contains(t.canonical_type)) {
        t.emissions_type = t.canonical_type;
      } else if (const FamilyFallback* fb = config.fallback.find(t.canonical_type)) {
        t.emissions_type = fb->surrogate_type;
        t.efficiency_factor = fb->efficiency_factor;
        t.provenance.set(Provenance::kFamilyFallback);
      } else {
        t.provenance.set(Provenance::kIncomputable);
        t.cause = IncomputableCause::kNoCcdProfile;
      }
    }

    if (auto it = registry.find(t.tail_number); it != registry.end()) {
      // Registry values may be FAA engine codes; expand them when known.
      std::string_view designation = it->second;
      if (auto c = code_text.find(upper_trim(designation)); c != code_text.end()) {
        designation = c->second;
      }
      if (auto m = index.match(designation, config.jaccard_threshold)) {
        t.engine_uid = m->engine_uid;
        t.engine_match_score = m->score;
        t.provenance.set(m->score == 1.0 ? Provenance::kEngineExact
                                         : Provenance::kEngineJaccard);
      }
    }
    tables.tails_.push_back(std::move(t));
  }

  tables.popular_ = build_popular_engine_table(tables.tails_);
  if (config.popular_override) {
    for (const auto& [type, uid] : config.popular_override->entries()) {
      if (!index.contains(uid)) {
        throw InputError(fmt::format(
            "popular engine override '{}' -> '{}': engine not in the ICAO databank",
            type, uid));
      }
      tables.popular_.set(type, uid);
    }
  }

  for (auto& t : tables.tails_) {
    if (!t.engine_uid.empty() || t.cause != IncomputableCause::kNone) continue;
    if (const std::string* uid = tables.popular_.find(t.canonical_type)) {
      t.engine_uid = *uid;
      t.provenance.set(Provenance::kEnginePopularFallback);
    } else {
      t.provenance.set(Provenance::kIncomputable);
      t.cause = IncomputableCause::kNoEngineMatch;
    }
  }
  std::sort(tables.tails_.begin(), tables.tails_.end(),
            [](const auto& a, const auto& b) { return a.tail_number < b.tail_number; });
  return tables;
}

const TailResolution* MatchingTables::find_tail(std::string_view tail) const {
  auto it = std::lower_bound(
      tails_.begin(), tails_.end(), tail,
      [](const TailResolution& t, std::string_view key) { return t.tail_number < key; });
  return (it != tails_.end() && it->tail_number == tail) ? &*it : nullptr;
}

ResolvedFlight resolve_flight(const ingest::FlightRecord& flight,
                              const MatchingTables& tables) {
  ResolvedFlight rf;
  rf.flight = flight;
  if (!flight.tail_number) {
    rf.mark_incomputable(IncomputableCause::kMissingTail);
    return rf;
  }
  if (!flight.air_time_min) {
    rf.mark_incomputable(IncomputableCause::kMissingAirTime);
    return rf;
  }
  const TailResolution* t = tables.find_tail(*flight.tail_number);
  if (!t) {
    rf.mark_incomputable(IncomputableCause::kNoAirframeRecord);
    return rf;
  }
  rf.canonical_type = t->canonical_type;
  rf.seat_count = t->seat_count;
  rf.engine_count = t->engine_count;
  rf.engine_uid = t->engine_uid;
  rf.emissions_type = t->emissions_type;
  rf.efficiency_factor = t->efficiency_factor;
  rf.provenance = t->provenance;
  rf.cause = t->cause;
  return rf;
}

}  // namespace aeroemit::matching
