/*
 * Copyright 2026 The PPSR Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Tab-separated tables with a fixed column schema.
//
// UTF-8 text, LF or CRLF line endings, blank lines ignored. The first line is
// taken as a header when its first field is not an integer; header names are
// not checked against the schema, only the column count is.

#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ppsr/error.hpp"

namespace ppsr::data {

struct TsvTable {
  std::string source;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based, one per row
  bool had_header = false;

  std::size_t size() const { return rows.size(); }

  std::string where(std::size_t row) const {
    return source + ":" + std::to_string(line_numbers.at(row));
  }

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw ConfigError("no column named '" + std::string(name) + "' in " + source);
  }

  std::int64_t integer(std::size_t row, std::size_t col) const;
  std::int64_t count(std::size_t row, std::size_t col) const;
  double real(std::size_t row, std::size_t col) const;
};

namespace detail {

inline std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

}  // namespace detail

inline std::int64_t TsvTable::integer(std::size_t row, std::size_t col) const {
  std::int64_t v = 0;
  if (!detail::parse_int(rows.at(row).at(col), v)) {
    throw DataError(where(row) + ": column '" + columns.at(col) + "' expects an integer, got '" +
                    rows[row][col] + "'");
  }
  return v;
}

inline std::int64_t TsvTable::count(std::size_t row, std::size_t col) const {
  std::int64_t v = integer(row, col);
  if (v < 0) {
    throw DataError(where(row) + ": column '" + columns.at(col) + "' expects a non-negative count");
  }
  return v;
}

inline double TsvTable::real(std::size_t row, std::size_t col) const {
  const std::string& s = rows.at(row).at(col);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw DataError(where(row) + ": column '" + columns.at(col) + "' expects a number, got '" +
                    s + "'");
  }
  return v;
}

inline TsvTable parse_tsv(std::string_view text, std::vector<std::string> columns,
                          std::string source = "<memory>") {
  TsvTable t;
  t.source = std::move(source);
  t.columns = std::move(columns);
  std::size_t line_no = 0;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = detail::split_tabs(line);
    if (first) {
      first = false;
      std::int64_t ignored;
      if (!detail::parse_int(fields.front(), ignored)) {
        if (fields.size() != t.columns.size()) {
          throw DataError(t.source + ":" + std::to_string(line_no) + ": header has " +
                          std::to_string(fields.size()) + " columns, expected " +
                          std::to_string(t.columns.size()));
        }
        t.had_header = true;
        continue;
      }
    }
    if (fields.size() != t.columns.size()) {
      throw DataError(t.source + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(t.columns.size()) + " columns, found " +
                      std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(line_no);
  }
  return t;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TsvTable read_tsv(const std::filesystem::path& path, std::vector<std::string> columns) {
  return parse_tsv(read_text_file(path), std::move(columns), path.string());
}

}  // namespace ppsr::data
