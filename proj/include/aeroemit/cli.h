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

#ifndef AEROEMIT_CLI_H_
#define AEROEMIT_CLI_H_

#include <filesystem>
#include <optional>
#include <ostream>

namespace aeroemit::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitMissingArtifact = 3;

struct Options {
  std::optional<std::filesystem::path> config;  // falls back to $AEROEMIT_CONFIG
  std::optional<unsigned> threads;              // default: hardware concurrency
  std::optional<double> jaccard_threshold;
  std::optional<std::filesystem::path> output_dir;
  bool json = false;
  int top = 5;
};

int cmd_validate(const Options& options, std::ostream& out, std::ostream& err);
int cmd_run(const Options& options, std::ostream& out, std::ostream& err);
int cmd_report(const std::filesystem::path& output_dir, int top, std::ostream& out,
               std::ostream& err);

// Full command line: `aeroemit <validate|run|report> [options]`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aeroemit::cli

#endif  // AEROEMIT_CLI_H_
