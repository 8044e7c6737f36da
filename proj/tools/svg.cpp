// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace sdirng::tools {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 6;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(v);
  return t;
}

}  // namespace

std::string render_svg(const Plot& p) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : p.series)
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (p.log_x && x <= 0) continue;
      const double xv = p.log_x ? std::log10(x) : x;
      x0 = std::min(x0, xv);
      x1 = std::max(x1, xv);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + ((p.log_x ? std::log10(x) : x) - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(p.title) + "</text>\n";
  o += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  std::vector<double> xt;
  if (p.log_x) {
    for (double e = std::ceil(x0 - 1e-9); e <= x1 + 1e-9; e += 1) xt.push_back(std::pow(10.0, e));
    if (xt.empty()) xt = {std::pow(10.0, x0), std::pow(10.0, x1)};
  } else {
    xt = linear_ticks(x0, x1);
  }
  for (double v : xt) {
    const double x = sx(v);
    o += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
         num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
         tick_label(v) + "</text>\n";
  }
  for (double v : linear_ticks(y0, y1)) {
    const double y = sy(v);
    o += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(y) +
         "\" stroke=\"black\"/>\n";
    o += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" + num(y) +
         "\" stroke=\"#e0e0e0\"/>\n";
    o += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + tick_label(v) +
         "</text>\n";
  }
  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 15) + "\" text-anchor=\"middle\">" +
       escape(p.x_label) + (p.log_x ? " (log)" : "") + "</text>\n";
  o += "<text transform=\"translate(20," + num(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(p.y_label) + "</text>\n";

  for (std::size_t i = 0; i < p.series.size(); ++i) {
    const Series& s = p.series[i];
    const char* color = kPalette[(s.color >= 0 ? s.color : static_cast<int>(i)) % 8];
    std::string pts;
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y) || (p.log_x && x <= 0)) continue;
      if (!pts.empty()) pts += ' ';
      pts += num(sx(x)) + "," + num(sy(y));
    }
    o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"" +
         (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n";
    if (s.markers)
      for (auto [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y) || (p.log_x && x <= 0)) continue;
        o += "<circle cx=\"" + num(sx(x)) + "\" cy=\"" + num(sy(y)) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
      }
    const double ly = kTop + 12 + 18 * static_cast<double>(i);
    const double lx = kLeft + pw + 12;
    o += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 24) + "\" y2=\"" + num(ly) +
         "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" + (s.dashed ? " stroke-dasharray=\"6,4\"" : "") +
         "/>\n";
    o += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) + "\">" + escape(s.label) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

Plot plot_from_csv(const CsvTable& t) {
  Plot p;
  if (t.column("primal_lower") >= 0) {
    p.title = "single-round guessing probability";
    p.x_label = "delta";
    p.y_label = "P_guess";
    Series lo{"primal (lower)", {}, false, true, 0}, hi{"dual (upper)", {}, true, true, 1};
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double d = t.number(i, "delta");
      lo.points.emplace_back(d, t.number(i, "primal_lower"));
      hi.points.emplace_back(d, t.number(i, "dual_upper"));
    }
    p.series = {lo, hi};
    return p;
  }
  if (t.column("mean_rate") < 0) throw std::runtime_error("plot: table has neither pguess nor rate columns");
  // series keyed by gamma when gamma varies, else by delta
  std::map<std::string, int> gammas;
  for (std::size_t i = 0; i < t.rows.size(); ++i) gammas[t.text(i, "gamma")] = 0;
  const bool by_gamma = gammas.size() > 1;
  const std::string key = by_gamma ? "gamma" : "delta";
  p.title = by_gamma ? "rate vs n by noise" : "rate vs n by delta";
  p.x_label = "n";
  p.y_label = "rate (bits/round)";
  p.log_x = true;
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> finite;
  std::map<std::string, double> asym;
  double nmin = 1e300, nmax = -1e300;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string k = t.text(i, key);
    if (std::find(order.begin(), order.end(), k) == order.end()) order.push_back(k);
    if (t.text(i, "kind") == "asymptotic") {
      asym[k] = t.number(i, "mean_rate");
    } else {
      const double n = t.number(i, "n");
      finite[k].emplace_back(n, t.number(i, "mean_rate"));
      nmin = std::min(nmin, n);
      nmax = std::max(nmax, n);
    }
  }
  if (nmin > nmax) nmin = 1, nmax = 10;
  for (std::size_t c = 0; c < order.size(); ++c) {
    const std::string& k = order[c];
    if (finite.count(k)) {
      auto pts = finite[k];
      std::sort(pts.begin(), pts.end());
      p.series.push_back({key + "=" + k, pts, false, true, static_cast<int>(c)});
    }
    if (asym.count(k))
      p.series.push_back({key + "=" + k + " asym", {{nmin, asym[k]}, {nmax, asym[k]}}, true, false,
                          static_cast<int>(c)});
  }
  return p;
}

}  // namespace sdirng::tools
