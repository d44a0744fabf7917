// Copyright 2026 The xhbac Authors
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


#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace xhbac::experiments {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "xhbac";
inline constexpr const char* kToolVersion = "0.1.0";

/// Reals print with 12 significant digits; infinities as inf and -inf.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using Cell = std::variant<double, std::int64_t, std::string>;

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_real(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

/// Column-labelled rows plus a JSON metadata block, written as CSV with the
/// metadata on a leading '#' line.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("ResultTable: no columns");
  }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
      throw std::invalid_argument("ResultTable: row has " + std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  Json& metadata() { return metadata_; }
  const Json& metadata() const { return metadata_; }

  /// Header and rows only; identical inputs give identical bytes.
  std::string body() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
      out << '\n';
    }
    return out.str();
  }

  void write(std::ostream& os) const {
    Json meta = metadata_;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    os << "# " << meta.dump() << '\n' << body();
  }

  std::string str() const {
    std::ostringstream out;
    write(out);
    return out.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  Json metadata_ = Json::object();
};

}  // namespace xhbac::experiments
