// Copyright 2026 The dilute authors
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


// Artifact writers. Every CSV starts with one '#' stamp line and every JSON
// document carries the same stamp fields, so a file can be traced back to the
// configuration and seed that produced it. Nothing time-dependent is written.

#ifndef DILUTE_APP_OUTPUT_HPP
#define DILUTE_APP_OUTPUT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dilute::app {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

struct Stamp {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

const char* tool_version();

// Shortest text that parses back to the same double ("%.17g" with trailing fallback).
std::string format_double(double v);
// Empty field for a missing value.
std::string format_optional(const std::optional<double>& v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string render(const Stamp& stamp) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Adds schema_version, config_hash, seed and version in front of `body`.
Json stamped(const Stamp& stamp, const Json& body);

void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const CsvTable& table, const Stamp& stamp);
void write_json(const std::string& path, const Json& doc);
// 8-byte magic "DLTRAJ01", uint64 rows, uint64 cols, then rows*cols float64, row-major,
// all little-endian.
void write_matrix_binary(const std::string& path, std::uint64_t rows, std::uint64_t cols,
                         const std::vector<double>& row_major);

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::optional<std::size_t> column(const std::string& name) const;
};
// Skips '#' lines; throws std::runtime_error on ragged rows.
CsvData read_csv(const std::string& path);

}  // namespace dilute::app

#endif  // DILUTE_APP_OUTPUT_HPP
