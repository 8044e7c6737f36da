// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sdirng::tools {

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

const std::string& CsvTable::text(std::size_t row, const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw std::runtime_error("csv: missing column '" + name + "'");
  if (row >= rows.size() || static_cast<std::size_t>(c) >= rows[row].size())
    throw std::runtime_error("csv: short row");
  return rows[row][c];
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const std::string& s = text(row, name);
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("csv: bad number '" + s + "'");
  return v;
}

std::string format_number(double v) {
  if (v == 0) return "0";  // folds -0
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_count(unsigned long long v) { return std::to_string(v); }

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string write_csv(const CsvTable& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quote(cells[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> cur;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      cur.push_back(cell);
      cell.clear();
      any = true;
    } else if (c == '\n') {
      cur.push_back(cell);
      lines.push_back(std::move(cur));
      cur.clear();
      cell.clear();
      any = false;
    } else if (c != '\r') {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quote");
  if (any) {
    cur.push_back(cell);
    lines.push_back(std::move(cur));
  }
  if (lines.empty()) throw std::runtime_error("csv: empty input");
  CsvTable t;
  t.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != t.header.size()) throw std::runtime_error("csv: row width differs from header");
    t.rows.push_back(std::move(lines[i]));
  }
  return t;
}

}  // namespace sdirng::tools
