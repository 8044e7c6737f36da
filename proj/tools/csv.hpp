// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace sdirng::tools {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // -1 when absent
  int column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
};

// shortest round-trip is not needed, only stability: %.12g
std::string format_number(double v);
std::string format_count(unsigned long long v);

std::string write_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);

}  // namespace sdirng::tools
