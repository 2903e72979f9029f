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

#include "aeroemit/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "aeroemit/errors.h"

namespace aeroemit::csv {
namespace {

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

void write_field(std::ostream& out, std::string_view field) {
  if (!needs_quotes(field)) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return text.substr(first, last - first + 1);
}

std::optional<std::vector<std::string>> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (in_quotes) return std::nullopt;
  fields.push_back(std::move(current));
  return fields;
}

Table read(const std::filesystem::path& path, std::string_view table) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError(fmt::format("{}: cannot open input file '{}'", table,
                                 path.string()));
  }
  Table result;
  result.path = path;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (!have_header) {
      if (!fields) {
        throw InputError(fmt::format("{}: {}:{}: malformed header line", table,
                                     path.string(), line_no));
      }
      for (auto& f : *fields) f = std::string(trim(f));
      result.header = std::move(*fields);
      have_header = true;
      continue;
    }
    Row row;
    row.line = line_no;
    if (fields) {
      row.fields = std::move(*fields);
    } else {
      row.error = "unterminated quoted field";
    }
    result.rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw InputError(fmt::format("{}: {}: missing header row", table,
                                 path.string()));
  }
  return result;
}

void require_header(const Table& table, std::string_view name,
                    std::span<const std::string_view> expected) {
  bool ok = table.header.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    ok = table.header[i] == expected[i];
  }
  if (ok) return;
  std::string want;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) want += ',';
    want += expected[i];
  }
  std::string got;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) got += ',';
    got += table.header[i];
  }
  throw InputError(fmt::format("{}: {}:1: header mismatch: expected '{}', got '{}'",
                               name, table.path.string(), want, got));
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    write_field(out, fields[i]);
  }
  out << '\n';
}

void write_row(std::ostream& out, std::span<const std::string_view> fields) {
  bool first = true;
  for (std::string_view f : fields) {
    if (!first) out << ',';
    first = false;
    write_field(out, f);
  }
  out << '\n';
}

void write_row(std::ostream& out,
               std::initializer_list<std::string_view> fields) {
  write_row(out, std::span<const std::string_view>(fields.begin(), fields.size()));
}

std::optional<double> parse_double(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<long long> parse_int(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  long long value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string format_exact(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals) {
  std::string s = fmt::format("{:.{}f}", value, decimals);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

}  // namespace aeroemit::csv
