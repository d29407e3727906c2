// Copyright 2026 The regen-capacity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Tabular results and their CSV / JSON renderings. Numbers are written with
// 12 significant digits; a missing value is an empty CSV field or JSON null.

#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "regen/errors.hpp"
#include "regen/format.hpp"

namespace regen {

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

enum class OutputFormat { kCsv, kJson };

class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw DomainError("table: row width mismatch");
    rows_.push_back(std::move(row));
  }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i] == name) return i;
    }
    throw DomainError("table: no column '" + name + "'");
  }

  /// Numeric value at (row, column); nullopt for missing or text cells.
  std::optional<double> number(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    return std::nullopt;
  }

  std::string text(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return {};
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

inline Cell num(double v) { return v; }
inline Cell num(std::optional<double> v) { return v ? Cell{*v} : Cell{}; }
inline Cell integer(std::int64_t v) { return v; }

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return {};
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return csv_field(v);
        }
      },
      c);
}

}  // namespace detail

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns().size(); ++i) {
    if (i) out += ',';
    out += detail::csv_field(t.columns()[i]);
  }
  out += '\n';
  for (const auto& row : t.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += detail::cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows()) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      auto& slot = obj[t.columns()[i]];
      if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) slot = round_to_output(*d);
      } else if (const auto* n = std::get_if<std::int64_t>(&c)) {
        slot = *n;
      } else if (const auto* s = std::get_if<std::string>(&c)) {
        slot = *s;
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline std::string to_json_text(const Table& t) { return to_json(t).dump(2) + "\n"; }

/// Inverse of to_json_text. Column order follows the first record; an
/// empty array gives an empty table.
inline Table parse_json_table(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("json table: ") + e.what());
  }
  if (!j.is_array()) throw ConfigError("json table: expected an array of records");
  if (j.empty()) return Table{};
  std::vector<std::string> cols;
  for (const auto& [key, value] : j.front().items()) cols.push_back(key);
  Table t(cols);
  for (const auto& rec : j) {
    if (!rec.is_object() || rec.size() != cols.size()) {
      throw ConfigError("json table: records must share one set of fields");
    }
    std::vector<Cell> row;
    for (const auto& name : cols) {
      if (!rec.contains(name)) throw ConfigError("json table: missing field '" + name + "'");
      const auto& v = rec.at(name);
      if (v.is_null()) {
        row.emplace_back();
      } else if (v.is_number_integer()) {
        row.emplace_back(v.get<std::int64_t>());
      } else if (v.is_number()) {
        row.emplace_back(v.get<double>());
      } else if (v.is_string()) {
        row.emplace_back(v.get<std::string>());
      } else {
        throw ConfigError("json table: unsupported value in field '" + name + "'");
      }
    }
    t.add_row(std::move(row));
  }
  return t;
}

inline std::string render(const Table& t, OutputFormat f) {
  return f == OutputFormat::kCsv ? to_csv(t) : to_json_text(t);
}

/// Writes the table to `path` ("-" is standard output).
inline void emit(const Table& t, OutputFormat f, const std::string& path) {
  const std::string body = render(t, f);
  if (path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace regen
