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

#ifndef AEROEMIT_CSV_H_
#define AEROEMIT_CSV_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aeroemit::csv {

struct Row {
  std::size_t line = 0;  // 1-based physical line number in the file
  std::vector<std::string> fields;
  std::string error;     // non-empty when the line could not be split
};

struct Table {
  std::filesystem::path path;
  std::vector<std::string> header;
  std::vector<Row> rows;
};

// Splits one line on commas. Double-quoted fields may contain commas and
// doubled quotes; an unterminated quote yields std::nullopt.
std::optional<std::vector<std::string>> split_line(std::string_view line);

// Reads a comma-delimited UTF-8 file. Blank lines are skipped, a trailing
// '\r' is stripped, and a leading UTF-8 BOM is ignored. Throws InputError
// if the file cannot be opened or has no header line. `table` names the
// dataset in diagnostics.
Table read(const std::filesystem::path& path, std::string_view table);

// Throws InputError unless `table.header` equals `expected` exactly.
void require_header(const Table& table, std::string_view name,
                    std::span<const std::string_view> expected);

// Writes one record, quoting fields that need it, terminated by '\n'.
void write_row(std::ostream& out, std::span<const std::string> fields);
void write_row(std::ostream& out, std::span<const std::string_view> fields);
void write_row(std::ostream& out, std::initializer_list<std::string_view> fields);

// Strict field parsers: the whole field must be consumed and the value
// finite. Leading/trailing ASCII blanks are tolerated.
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

std::string_view trim(std::string_view text);

// Shortest representation that parses back to the same double.
std::string format_exact(double value);
// Fixed-point with `decimals` digits; never emits "-0.00".
std::string format_fixed(double value, int decimals);

}  // namespace aeroemit::csv

#endif  // AEROEMIT_CSV_H_
