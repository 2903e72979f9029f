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

#include "aeroemit/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "aeroemit/csv.h"
#include "aeroemit/errors.h"
#include "aeroemit/pipeline.h"

namespace aeroemit::cli {
namespace {

pipeline::RunConfig load_config(const Options& options) {
  std::filesystem::path path;
  if (options.config) {
    path = *options.config;
  } else if (const char* env = std::getenv(pipeline::kConfigEnvVar.data()); env && *env) {
    path = env;
  } else {
    throw InputError(fmt::format("no config file: pass --config or set {}",
                                 pipeline::kConfigEnvVar));
  }
  pipeline::RunConfig cfg = pipeline::RunConfig::load(path);
  if (options.jaccard_threshold) {
    if (*options.jaccard_threshold < 0.0 || *options.jaccard_threshold > 1.0) {
      throw InputError("--jaccard-threshold must be in [0, 1]");
    }
    cfg.jaccard_threshold = *options.jaccard_threshold;
  }
  if (options.output_dir) cfg.output_dir = *options.output_dir;
  if (options.threads) cfg.threads = *options.threads;
  return cfg;
}

unsigned worker_count(const pipeline::RunConfig& cfg) {
  if (cfg.threads) return *cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs `body`, mapping the error taxonomy onto exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ArtifactError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMissingArtifact;
  }
}

csv::Table read_artifact(const std::filesystem::path& dir, std::string_view name) {
  const auto path = dir / name;
  if (!std::filesystem::is_regular_file(path)) {
    throw ArtifactError(fmt::format("missing run output '{}'", path.string()));
  }
  try {
    return csv::read(path, name);
  } catch (const InputError& e) {
    throw ArtifactError(e.what());
  }
}

std::size_t column(const csv::Table& t, std::string_view name) {
  auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) {
    throw ArtifactError(fmt::format("{}: missing column '{}'", t.path.string(), name));
  }
  return static_cast<std::size_t>(it - t.header.begin());
}

double number(const csv::Row& row, std::size_t col) {
  if (col >= row.fields.size()) return 0.0;
  return csv::parse_double(row.fields[col]).value_or(0.0);
}

}  // namespace

int cmd_validate(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load_config(options);
    const auto report = pipeline::validate(cfg, worker_count(cfg));
    out << (options.json ? report.to_json() : report.to_text());
    return kExitOk;
  });
}

int cmd_run(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load_config(options);
    const auto result = pipeline::run(cfg, worker_count(cfg));
    out << result.coverage.to_text();
    out << "outputs written to " << cfg.output_dir.string() << '\n';
    return kExitOk;
  });
}

int cmd_report(const std::filesystem::path& output_dir, int top, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const auto airlines = read_artifact(output_dir, pipeline::kAirlineSummaryCsv);
    const auto airports = read_artifact(output_dir, pipeline::kAirportLtoCsv);
    const auto gases = read_artifact(output_dir, pipeline::kGasBreakdownCsv);
    const auto coverage_path = output_dir / pipeline::kCoverageJson;
    std::ifstream in(coverage_path, std::ios::binary);
    if (!in) {
      throw ArtifactError(fmt::format("missing run output '{}'", coverage_path.string()));
    }
    std::ostringstream text;
    text << in.rdbuf();
    const auto coverage = pipeline::CoverageReport::from_json(text.str());

    if (coverage.computed_flights == 0) {
      out << fmt::format("no computed flights ({} flights in input)\n",
                         coverage.total_flights);
      return kExitOk;
    }
    out << fmt::format("{} of {} flights computed (coverage {:.1f}%)\n",
                       coverage.computed_flights, coverage.total_flights,
                       100.0 * coverage.coverage());

    struct Ranked {
      std::string key;
      double co2e = 0.0;
      std::string extra;
    };
    auto print_ranked = [&](std::string_view title, std::vector<Ranked> rows) {
      std::stable_sort(rows.begin(), rows.end(),
                       [](const Ranked& a, const Ranked& b) { return a.co2e > b.co2e; });
      out << '\n' << title << '\n';
      const std::size_t n = std::min<std::size_t>(rows.size(), static_cast<std::size_t>(top));
      for (std::size_t i = 0; i < n; ++i) {
        out << fmt::format("  {:>2}. {:<6} {:>18.2f} kg CO2e{}\n", i + 1, rows[i].key,
                           rows[i].co2e, rows[i].extra);
      }
    };

    std::vector<Ranked> by_airline;
    const auto a_code = column(airlines, "carrier");
    const auto a_co2e = column(airlines, "total_co2e_kg");
    const auto a_ratio = column(airlines, "co2_per_seat_mile");
    const auto a_flights = column(airlines, "emission_flights");
    for (const auto& row : airlines.rows) {
      if (number(row, a_flights) <= 0) continue;
      by_airline.push_back({row.fields[a_code], number(row, a_co2e),
                            fmt::format("  ({} kg CO2/seat-mile)", row.fields[a_ratio])});
    }
    print_ranked("Top airlines by total CO2e", std::move(by_airline));

    std::vector<Ranked> by_airport;
    const auto p_code = column(airports, "airport");
    const auto p_co2e = column(airports, "lto_co2e_kg");
    for (const auto& row : airports.rows) {
      by_airport.push_back({row.fields[p_code], number(row, p_co2e), ""});
    }
    print_ranked("Top airports by local LTO CO2e", std::move(by_airport));

    out << "\nCO2e share by gas\n";
    const auto g_cycle = column(gases, "cycle");
    const auto g_gas = column(gases, "gas");
    const auto g_co2e = column(gases, "co2e_kg");
    for (std::string_view cycle : {"LTO", "CCD"}) {
      double total = 0.0;
      for (const auto& row : gases.rows) {
        if (row.fields[g_cycle] == cycle) total += number(row, g_co2e);
      }
      std::string line = fmt::format("  {}:", cycle);
      for (const auto& row : gases.rows) {
        if (row.fields[g_cycle] != cycle) continue;
        const double share = total > 0 ? 100.0 * number(row, g_co2e) / total : 0.0;
        line += fmt::format(" {} {:.1f}%", row.fields[g_gas], share);
      }
      out << line << '\n';
    }
    return kExitOk;
  });
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Per-flight aviation greenhouse-gas emissions estimator"};
  app.require_subcommand(1);

  Options options;
  std::string config;
  unsigned threads = 0;
  double threshold = -1.0;
  std::string output_dir;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config,
                    "Run config file (default: $AEROEMIT_CONFIG)");
    cmd->add_option("-j,--threads", threads, "Worker threads (default: all cores)")
        ->check(CLI::Range(1u, 1024u));
    cmd->add_option("--jaccard-threshold", threshold,
                    "Minimum token Jaccard score for an engine match")
        ->check(CLI::Range(0.0, 1.0));
  };
  auto* validate = app.add_subcommand("validate", "Parse and resolve inputs; print coverage");
  add_common(validate);
  validate->add_flag("--json", options.json, "Print the coverage report as JSON");

  auto* run = app.add_subcommand("run", "Compute emissions and write all outputs");
  add_common(run);
  run->add_option("-o,--output-dir", output_dir, "Override the config's output_dir");

  auto* report = app.add_subcommand("report", "Summarize the outputs of a previous run");
  std::string report_dir;
  report->add_option("output_dir", report_dir, "Directory written by 'run'")->required();
  report->add_option("--top", options.top, "Rows per ranking")->check(CLI::Range(1, 1000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e_out;
    const int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (!config.empty()) options.config = config;
  if (threads > 0) options.threads = threads;
  if (threshold >= 0.0) options.jaccard_threshold = threshold;
  if (!output_dir.empty()) options.output_dir = output_dir;

  if (validate->parsed()) return cmd_validate(options, out, err);
  if (run->parsed()) return cmd_run(options, out, err);
  return cmd_report(report_dir, options.top, out, err);
}

}  // namespace aeroemit::cli
