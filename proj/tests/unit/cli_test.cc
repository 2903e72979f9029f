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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "aeroemit/cli.h"
#include "aeroemit/csv.h"
#include "aeroemit/errors.h"
#include "aeroemit/pipeline.h"
#include "doctest.h"
#include "test_support.h"

using namespace aeroemit;
using aeroemit::testing::read_text;
using aeroemit::testing::TempDir;
using aeroemit::testing::write_text;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "aeroemit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Copies the shipped DL2441 sample so runs write into a scratch directory.
fs::path copy_sample(const TempDir& dir) {
  for (const auto& entry : fs::directory_iterator(aeroemit::testing::sample_dir())) {
    if (entry.is_regular_file()) fs::copy_file(entry.path(), dir / entry.path().filename().string());
  }
  return dir / "aeroemit.conf";
}

const char* const kOutputs[] = {"flight_emissions.csv",  "incomputable_flights.csv",
                                "airline_summary.csv",   "airport_lto.csv",
                                "gas_breakdown.csv",     "scatter_co2e.csv",
                                "scatter_seat_mile.csv", "route_summary.csv",
                                "aircraft_summary.csv",  "engine_summary.csv",
                                "coverage_report.json"};

}  // namespace

TEST_CASE("validate: complete synthetic fixture covers every flight") {
  TempDir dir;
  aeroemit::testing::CorpusSpec spec;
  spec.flights = 300;
  const auto config = write_corpus(aeroemit::testing::make_corpus(spec), dir.path());
  const Result r = invoke({"validate", "-c", config.string(), "--json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto report = pipeline::CoverageReport::from_json(r.out);
  CHECK(report.total_flights == 300);
  CHECK(report.computed_flights == 300);
  CHECK(report.coverage() == 1.0);
  CHECK_FALSE(fs::exists(dir / "out"));  // dry run writes nothing
}

TEST_CASE("validate: one of ten flights without a tail") {
  TempDir dir;
  aeroemit::testing::CorpusSpec spec;
  spec.flights = 10;
  spec.missing_tail_every = 10;  // flight 0 only
  const auto corpus = aeroemit::testing::make_corpus(spec);
  REQUIRE(corpus.expected_missing_tail == 1);
  const auto config = write_corpus(corpus, dir.path());
  const Result r = invoke({"validate", "-c", config.string(), "--json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto report = pipeline::CoverageReport::from_json(r.out);
  CHECK(report.coverage() == 0.9);
  CHECK(report.cause_count(matching::IncomputableCause::kMissingTail) == 1);
  CHECK(report.ingest.front().flagged_incomputable == 1);
}

TEST_CASE("validate: missing input file exits 2 naming the path") {
  TempDir dir;
  const auto config = copy_sample(dir);
  fs::remove(dir / "b43.csv");
  const Result r = invoke({"validate", "-c", config.string()});
  CHECK(r.code == cli::kExitInputError);
  CHECK(r.err.find("b43.csv") != std::string::npos);
}

TEST_CASE("config errors exit 2") {
  TempDir dir;
  const auto config = copy_sample(dir);
  write_text(config, read_text(config) + "bogus_key = 1\n");
  CHECK(invoke({"validate", "-c", config.string()}).code == cli::kExitInputError);
  CHECK(invoke({"validate", "-c", (dir / "nope.conf").string()}).code == cli::kExitInputError);
  CHECK(invoke({"frobnicate"}).code == cli::kExitInputError);
  CHECK(invoke({"validate", "-c", config.string(), "--jaccard-threshold", "2"}).code ==
        cli::kExitInputError);
}

TEST_CASE("run: DL2441 single flight") {
  TempDir dir;
  const auto config = copy_sample(dir);
  const Result r = invoke({"run", "-c", config.string(), "-j", "1"});
  REQUIRE(r.code == cli::kExitOk);
  for (const char* name : kOutputs) CHECK(fs::exists(dir / "out" / name));
  CHECK_FALSE(fs::exists(dir / "out.staging"));

  const csv::Table t = csv::read(dir / "out" / "flight_emissions.csv", "flight_emissions");
  REQUIRE(t.rows.size() == 1);
  const auto col = [&](std::string_view name) {
    return std::find(t.header.begin(), t.header.end(), name) - t.header.begin();
  };
  const double total = *csv::parse_double(t.rows[0].fields[col("total_co2e_kg")]);
  CHECK(std::fabs(total - 43265.46) <= 0.01 * 43265.46);
  CHECK(t.rows[0].fields[col("provenance")] == "ENGINE_EXACT");
  CHECK(t.rows[0].fields[col("engine_uid")] == "CFM56-7B27E");

  const Result rep = invoke({"report", (dir / "out").string()});
  REQUIRE(rep.code == cli::kExitOk);
  CHECK(rep.out.find("1. DL") != std::string::npos);
  CHECK(rep.out.find("1. PHL") != std::string::npos);
  CHECK(rep.out.find("2. ATL") != std::string::npos);
  CHECK(rep.out.find("3. ") == std::string::npos);
}

TEST_CASE("run: rerun and thread count give byte-identical outputs") {
  TempDir dir;
  aeroemit::testing::CorpusSpec spec;
  spec.flights = 800;
  spec.missing_tail_every = 41;
  spec.missing_air_time_every = 43;
  spec.unknown_tail_every = 47;
  const auto config = write_corpus(aeroemit::testing::make_corpus(spec), dir.path());
  REQUIRE(invoke({"run", "-c", config.string(), "-j", "1", "-o", (dir / "a").string()}).code == 0);
  REQUIRE(invoke({"run", "-c", config.string(), "-j", "1", "-o", (dir / "b").string()}).code == 0);
  REQUIRE(invoke({"run", "-c", config.string(), "-j", "3", "-o", (dir / "c").string()}).code == 0);
  for (const char* name : kOutputs) {
    CAPTURE(name);
    const std::string a = read_text(dir / "a" / name);
    CHECK(a == read_text(dir / "b" / name));
    CHECK(a == read_text(dir / "c" / name));
  }
}

TEST_CASE("run: empty flight table") {
  TempDir dir;
  const auto config = copy_sample(dir);
  write_text(dir / "ontime.csv",
             "flight_date,carrier,flight_number,tail_number,origin,dest,air_time_min,"
             "taxi_in_min,taxi_out_min,distance_mi\n");
  REQUIRE(invoke({"run", "-c", config.string()}).code == cli::kExitOk);
  const auto report =
      pipeline::CoverageReport::from_json(read_text(dir / "out" / "coverage_report.json"));
  CHECK(report.total_flights == 0);
  CHECK(report.coverage() == 0.0);
  const csv::Table t = csv::read(dir / "out" / "flight_emissions.csv", "flight_emissions");
  CHECK(t.rows.empty());
  const Result rep = invoke({"report", (dir / "out").string()});
  CHECK(rep.code == cli::kExitOk);
  CHECK(rep.out.find("no computed flights") != std::string::npos);
}

TEST_CASE("run: failure leaves no partial output") {
  TempDir dir;
  const auto config = copy_sample(dir);
  write_text(dir / "blocker", "not a directory");
  const Result r = invoke({"run", "-c", config.string(), "-o", (dir / "blocker").string()});
  CHECK(r.code == cli::kExitInputError);
  CHECK(read_text(dir / "blocker") == "not a directory");
  CHECK_FALSE(fs::exists(dir / "blocker.staging"));
}

TEST_CASE("report: airports in descending LTO CO2e order") {
  TempDir dir;
  const auto config = copy_sample(dir);
  REQUIRE(invoke({"run", "-c", config.string()}).code == cli::kExitOk);
  // Hand-ordered masses: DEN (300) > ATL (200) > DFW (100), listed out of order.
  write_text(dir / "out" / "airport_lto.csv",
             "airport,departures,arrivals,lto_hc_kg,lto_co2_kg,lto_co_kg,lto_nox_kg,lto_co2e_kg\n"
             "DFW,1,0,0,100,0,0,100.00\n"
             "ATL,1,1,0,200,0,0,200.00\n"
             "DEN,0,1,0,300,0,0,300.00\n");
  const Result rep = invoke({"report", (dir / "out").string(), "--top", "3"});
  REQUIRE(rep.code == cli::kExitOk);
  const auto den = rep.out.find("1. DEN");
  const auto atl = rep.out.find("2. ATL");
  const auto dfw = rep.out.find("3. DFW");
  REQUIRE(den != std::string::npos);
  REQUIRE(atl != std::string::npos);
  REQUIRE(dfw != std::string::npos);
  CHECK(den < atl);
  CHECK(atl < dfw);
}

TEST_CASE("report: missing outputs exit 3") {
  TempDir dir;
  CHECK(invoke({"report", (dir / "nothing").string()}).code == cli::kExitMissingArtifact);
  const auto config = copy_sample(dir);
  REQUIRE(invoke({"run", "-c", config.string()}).code == cli::kExitOk);
  fs::remove(dir / "out" / "gas_breakdown.csv");
  CHECK(invoke({"report", (dir / "out").string()}).code == cli::kExitMissingArtifact);
  write_text(dir / "out" / "gas_breakdown.csv", "cycle,gas,raw_kg,co2e_kg\n");
  write_text(dir / "out" / "coverage_report.json", "{not json");
  CHECK(invoke({"report", (dir / "out").string()}).code == cli::kExitMissingArtifact);
}

TEST_CASE("config file from the environment") {
  TempDir dir;
  const auto config = copy_sample(dir);
  ::setenv("AEROEMIT_CONFIG", config.c_str(), 1);
  const Result r = invoke({"validate"});
  ::unsetenv("AEROEMIT_CONFIG");
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("coverage 1.0000") != std::string::npos);
  CHECK(invoke({"validate"}).code == cli::kExitInputError);
}

TEST_CASE("run config parsing") {
  const fs::path base = "/data/q3";
  const std::string required =
      "ontime = ontime.csv\nb43 = b43.csv\ntail_registry = reg.csv\n"
      "engine_codes = codes.csv\nicao_engines = /abs/icao.csv\nbada_ccd = bada.csv\n"
      "normalization_rules = rules.csv\nfamily_fallback = fb.csv\n";
  const auto cfg = pipeline::RunConfig::parse(required + "# comment\nco2e_factor_nox = 265\n"
                                                         "engine_multiplier = per-engine\n"
                                                         "interpolation_key = distance\n",
                                              base);
  CHECK(cfg.ontime == base / "ontime.csv");
  CHECK(cfg.icao_engines == "/abs/icao.csv");
  CHECK(cfg.output_dir == base / "out");
  CHECK(cfg.co2e_factors.nox == 265.0);
  CHECK(cfg.co2e_factors.co == 1.57);
  CHECK(cfg.engine_multiplier == emissions::EngineMultiplierMode::kPerEngine);
  CHECK(cfg.interpolation_key == emissions::CcdKey::kDistance);
  CHECK_FALSE(cfg.unep.has_value());

  const auto with_unep = pipeline::RunConfig::parse(
      required + "unep_short_haul_co2_per_seat_mile = 0.15\n"
                 "unep_long_haul_co2_per_seat_mile = 0.11\nunep_cutoff_mi = 500\n",
      base);
  REQUIRE(with_unep.unep.has_value());
  CHECK(with_unep.unep->cutoff_mi == 500.0);

  CHECK_THROWS_AS(pipeline::RunConfig::parse("ontime = x\n", base), InputError);
  CHECK_THROWS_AS(pipeline::RunConfig::parse(required + "unep_cutoff_mi = 500\n", base),
                  InputError);
  CHECK_THROWS_AS(pipeline::RunConfig::parse(required + "co2e_factor_co = 0\n", base), InputError);
  CHECK_THROWS_AS(pipeline::RunConfig::parse(required + "ontime = again.csv\n", base),
                  InputError);
  CHECK_THROWS_AS(pipeline::RunConfig::parse(required + "jaccard_threshold = 1.2\n", base),
                  InputError);
  CHECK_THROWS_AS(pipeline::RunConfig::parse(required + "engine_multiplier = both\n", base),
                  InputError);
}

TEST_CASE("coverage report JSON round trip") {
  pipeline::CoverageReport r;
  r.total_flights = 10;
  r.computed_flights = 7;
  r.causes[matching::IncomputableCause::kMissingTail] = 2;
  r.causes[matching::IncomputableCause::kNoEngineMatch] = 1;
  r.engine_jaccard = 3;
  r.family_fallback = 1;
  ingest::IngestReport t;
  t.table = "ontime";
  t.accept();
  t.reject(3, "bad date");
  r.ingest.push_back(t);
  const auto back = pipeline::CoverageReport::from_json(r.to_json());
  CHECK(back.to_json() == r.to_json());
  CHECK(back.coverage() == 0.7);
  CHECK(back.cause_count(matching::IncomputableCause::kMissingTail) == 2);
  CHECK_THROWS_AS(pipeline::CoverageReport::from_json("[]"), ArtifactError);
}

TEST_CASE("pipeline: coverage counts match the engineered gaps") {
  TempDir dir;
  aeroemit::testing::CorpusSpec spec;
  spec.flights = 1000;
  spec.missing_tail_every = 50;
  spec.missing_air_time_every = 30;
  spec.unknown_tail_every = 40;
  const auto corpus = aeroemit::testing::make_corpus(spec);
  const auto cfg = pipeline::RunConfig::load(write_corpus(corpus, dir.path()));
  const auto report = pipeline::validate(cfg, 2);
  const std::size_t missing = corpus.expected_missing_tail + corpus.expected_missing_air_time +
                              corpus.expected_unknown_tail;
  CHECK(report.total_flights == 1000);
  CHECK(report.computed_flights == 1000 - missing);
  CHECK(report.cause_count(matching::IncomputableCause::kMissingTail) ==
        corpus.expected_missing_tail);
  CHECK(report.cause_count(matching::IncomputableCause::kMissingAirTime) ==
        corpus.expected_missing_air_time);
  CHECK(report.cause_count(matching::IncomputableCause::kNoAirframeRecord) ==
        corpus.expected_unknown_tail);
}
