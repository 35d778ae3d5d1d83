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


#include "dilute/app/output.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dilute/app/config.hpp"

#ifndef DILUTE_VERSION
#define DILUTE_VERSION "unknown"
#endif

namespace dilute::app {

namespace {

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const char* tool_version() { return DILUTE_VERSION; }

std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::logic_error("csv row has " + std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(header_.size()));
  rows_.push_back(std::move(cells));
}

std::string CsvTable::render(const Stamp& stamp) const {
  std::string out = "# schema_version=" + std::to_string(kSchemaVersion) + " config_hash=" +
                    hex64(stamp.config_hash) + " seed=" + std::to_string(stamp.seed) +
                    " version=" + tool_version() + "\n";
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

Json stamped(const Stamp& stamp, const Json& body) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config_hash"] = hex64(stamp.config_hash);
  doc["seed"] = stamp.seed;
  doc["version"] = tool_version();
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  return doc;
}

void write_text(const std::string& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

void write_csv(const std::string& path, const CsvTable& table, const Stamp& stamp) {
  write_text(path, table.render(stamp));
}

void write_json(const std::string& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

void write_matrix_binary(const std::string& path, std::uint64_t rows, std::uint64_t cols,
                         const std::vector<double>& row_major) {
  if (row_major.size() != rows * cols) throw std::logic_error("matrix dump: size mismatch");
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write("DLTRAJ01", 8);
  put_u64(out, rows);
  put_u64(out, cols);
  for (double v : row_major) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::optional<std::size_t> CsvData::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

CsvData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  CsvData data;
  bool have_header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_line(line);
    if (!have_header) {
      data.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != data.header.size()) throw std::runtime_error(path + ": ragged row");
    data.rows.push_back(std::move(cells));
  }
  return data;
}

}  // namespace dilute::app
