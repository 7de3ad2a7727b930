#pragma once

// Rectangular table of sampled curves with a string metadata map, plus its
// CSV and JSON encodings.
//
// CSV layout: '#'-prefixed "key=value" metadata lines, one header line with
// the column names, then one line per row. Numbers use the shortest decimal
// form that round-trips (std::to_chars), so the output is independent of the
// C locale and parse(write(t)) == t bit for bit.
//
// JSON layout: {"meta": {...}, "columns": [...], "rows": [[...], ...]}.
// Non-finite values are written as null and read back as NaN.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "qdef/errors.hpp"

namespace qdef {

enum class Format { csv, json };

inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw ValidationError("format_double: conversion failed");
  return std::string(buf, end);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  // from_chars rejects a leading '+'; accept the plain shortest forms only.
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

class SeriesTable {
 public:
  SeriesTable() = default;
  explicit SeriesTable(std::vector<std::string> columns)
      : columns_(std::move(columns)) {
    for (const auto& name : columns_) check_name(name);
  }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
  const std::map<std::string, std::string>& meta() const noexcept { return meta_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  void add_row(std::vector<double> row) {
    if (row.size() != columns_.size()) {
      throw ValidationError("SeriesTable: row has " + std::to_string(row.size()) +
                            " values, expected " + std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
  }

  void set_meta(const std::string& key, std::string value) {
    if (key.empty() || key.find_first_of("=\n\r") != std::string::npos) {
      throw ValidationError("SeriesTable: invalid metadata key '" + key + "'");
    }
    if (value.find_first_of("\n\r") != std::string::npos) {
      throw ValidationError("SeriesTable: metadata value for '" + key +
                            "' spans lines");
    }
    meta_[key] = std::move(value);
  }
  void set_meta(const std::string& key, const char* value) {
    set_meta(key, std::string(value));
  }
  void set_meta(const std::string& key, double value) {
    set_meta(key, format_double(value));
  }
  void set_meta(const std::string& key, int value) {
    set_meta(key, std::to_string(value));
  }

  bool has_meta(const std::string& key) const { return meta_.count(key) != 0; }
  const std::string& meta(const std::string& key) const {
    auto it = meta_.find(key);
    if (it == meta_.end()) throw ValidationError("missing metadata '" + key + "'");
    return it->second;
  }

  std::size_t column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i] == name) return i;
    }
    throw ValidationError("no column named '" + std::string(name) + "'");
  }

  std::vector<double> column(std::string_view name) const {
    const std::size_t j = column_index(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r[j]);
    return out;
  }

  friend bool operator==(const SeriesTable& a, const SeriesTable& b) {
    if (a.columns_ != b.columns_ || a.meta_ != b.meta_ ||
        a.rows_.size() != b.rows_.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a.rows_.size(); ++i) {
      for (std::size_t j = 0; j < a.columns_.size(); ++j) {
        const double x = a.rows_[i][j];
        const double y = b.rows_[i][j];
        const bool same = (std::isnan(x) && std::isnan(y)) ||
                          (x == y && std::signbit(x) == std::signbit(y));
        if (!same) return false;
      }
    }
    return true;
  }

 private:
  static void check_name(const std::string& name) {
    if (name.empty() || name.find_first_of(",\n\r\"") != std::string::npos ||
        name.front() == '#') {
      throw ValidationError("SeriesTable: invalid column name '" + name + "'");
    }
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::map<std::string, std::string> meta_;
};

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string to_csv(const SeriesTable& table) {
  std::string out;
  for (const auto& [key, value] : table.meta()) {
    out += "# " + key + "=" + value + "\n";
  }
  for (std::size_t j = 0; j < table.columns().size(); ++j) {
    if (j) out += ',';
    out += table.columns()[j];
  }
  out += '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

inline SeriesTable parse_csv(std::string_view text) {
  SeriesTable table;
  std::map<std::string, std::string> meta;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      throw ValidationError("csv line " + std::to_string(line_no) +
                            ": CR line endings are not accepted");
    }
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_header) {
        throw ValidationError("csv line " + std::to_string(line_no) +
                              ": metadata after header");
      }
      std::string_view body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const std::size_t eq = body.find('=');
      if (eq == std::string_view::npos) {
        throw ValidationError("csv line " + std::to_string(line_no) +
                              ": metadata without '='");
      }
      meta[std::string(body.substr(0, eq))] = std::string(body.substr(eq + 1));
      continue;
    }
    if (!have_header) {
      std::vector<std::string> names;
      for (auto part : detail::split(line, ',')) names.emplace_back(part);
      table = SeriesTable(std::move(names));
      for (auto& [k, v] : meta) table.set_meta(k, v);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    for (auto part : detail::split(line, ',')) {
      try {
        row.push_back(parse_double(part));
      } catch (const ValidationError& e) {
        throw ValidationError("csv line " + std::to_string(line_no) + ": " +
                              e.what());
      }
    }
    try {
      table.add_row(std::move(row));
    } catch (const ValidationError& e) {
      throw ValidationError("csv line " + std::to_string(line_no) + ": " +
                            e.what());
    }
  }
  if (!have_header) throw ValidationError("csv: missing header line");
  return table;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline std::string to_json(const SeriesTable& table) {
  nlohmann::ordered_json doc;
  doc["meta"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.meta()) doc["meta"][key] = value;
  doc["columns"] = table.columns();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows()) {
    auto jr = nlohmann::ordered_json::array();
    for (double v : row) {
      if (std::isfinite(v)) {
        jr.push_back(v);
      } else {
        jr.push_back(nullptr);
      }
    }
    rows.push_back(std::move(jr));
  }
  doc["rows"] = std::move(rows);
  return doc.dump() + "\n";
}

inline SeriesTable parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("columns") || !doc.contains("rows")) {
    throw ValidationError("json: expected object with 'columns' and 'rows'");
  }
  SeriesTable table(doc["columns"].get<std::vector<std::string>>());
  if (doc.contains("meta")) {
    for (const auto& [key, value] : doc["meta"].items()) {
      table.set_meta(key, value.get<std::string>());
    }
  }
  for (const auto& jr : doc["rows"]) {
    std::vector<double> row;
    for (const auto& v : jr) {
      row.push_back(v.is_null() ? std::nan("") : v.get<double>());
    }
    table.add_row(std::move(row));
  }
  return table;
}

inline std::string encode(const SeriesTable& table, Format format) {
  return format == Format::csv ? to_csv(table) : to_json(table);
}

inline SeriesTable decode(std::string_view text, Format format) {
  return format == Format::csv ? parse_csv(text) : parse_json(text);
}

inline const char* extension(Format format) {
  return format == Format::csv ? ".csv" : ".json";
}

inline void write_table(const std::string& path, const SeriesTable& table,
                        Format format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << encode(table, format);
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

inline SeriesTable read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return decode(buffer.str(), is_json ? Format::json : Format::csv);
}

}  // namespace qdef
