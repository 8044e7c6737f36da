// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csv.hpp"

namespace sdirng::tools {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
  bool markers = true;
  int color = -1;  // palette index, -1 picks by position
};

struct Plot {
  std::string title, x_label, y_label;
  bool log_x = false;
  std::vector<Series> series;
};

std::string render_svg(const Plot& p);

// The plot for a pguess or rates table, built from the table alone.
Plot plot_from_csv(const CsvTable& t);

}  // namespace sdirng::tools
