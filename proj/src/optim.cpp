// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/optim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "sdirng/error.hpp"

namespace sdirng::optim {

double AffineScalar::eval(std::span<const double> y) const {
  double v = constant;
  for (std::size_t j = 0; j < coef.size(); ++j) v += coef[j] * y[j];
  return v;
}

Sym2 AffineSym2::eval(std::span<const double> y) const {
  Sym2 s = constant;
  for (std::size_t j = 0; j < coef.size(); ++j) {
    s.a += coef[j].a * y[j];
    s.b += coef[j].b * y[j];
    s.c += coef[j].c * y[j];
  }
  return s;
}

double ConcaveProgram::objective(std::span<const double> y) const {
  double f = 0.0;
  for (std::size_t j = 0; j < linear.size(); ++j) f += linear[j] * y[j];
  for (const auto& lt : log_terms)
    if (lt.weight != 0.0) f += lt.weight * std::log(lt.arg.eval(y));
  return f;
}

double ConcaveProgram::min_slack(std::span<const double> y) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& lt : log_terms) m = std::min(m, lt.arg.eval(y));
  for (const auto& p : positive) m = std::min(m, p.eval(y));
  for (const auto& s : psd) {
    const Sym2 v = s.eval(y);
    m = std::min(m, 0.5 * (v.a + v.c) - std::hypot(0.5 * (v.a - v.c), v.b));
  }
  return m;
}

namespace {

struct Eval {
  double phi;
  bool ok;
};

class Barrier {
 public:
  explicit Barrier(const ConcaveProgram& p) : p_(p), n_(p.dim) {}

  std::size_t degree() const { return p_.log_terms.size() + p_.positive.size() + 2 * p_.psd.size(); }

  Eval value(std::span<const double> y, double t) const {
    double phi = 0.0;
    for (std::size_t j = 0; j < p_.linear.size(); ++j) phi -= t * p_.linear[j] * y[j];
    for (const auto& lt : p_.log_terms) {
      const double l = lt.arg.eval(y);
      if (!(l > 0.0)) return {0.0, false};
      phi -= (t * lt.weight + 1.0) * std::log(l);
    }
    for (const auto& ps : p_.positive) {
      const double l = ps.eval(y);
      if (!(l > 0.0)) return {0.0, false};
      phi -= std::log(l);
    }
    for (const auto& s : p_.psd) {
      const Sym2 v = s.eval(y);
      const double det = v.a * v.c - v.b * v.b;
      if (!(v.a > 0.0 && v.c > 0.0 && det > 0.0)) return {0.0, false};
      phi -= std::log(det);
    }
    return {phi, true};
  }

  // gradient and Hessian of the centering objective
  void derivatives(std::span<const double> y, double t, std::vector<double>& g,
                   std::vector<double>& h) const {
    g.assign(n_, 0.0);
    h.assign(n_ * n_, 0.0);
    for (std::size_t j = 0; j < p_.linear.size(); ++j) g[j] -= t * p_.linear[j];
    auto scalar = [&](const AffineScalar& s, double w) {
      const double l = s.eval(y);
      for (std::size_t j = 0; j < s.coef.size(); ++j) {
        if (s.coef[j] == 0.0) continue;
        g[j] -= w * s.coef[j] / l;
        for (std::size_t k = 0; k < s.coef.size(); ++k) h[j * n_ + k] += w * s.coef[j] * s.coef[k] / (l * l);
      }
    };
    for (const auto& lt : p_.log_terms) scalar(lt.arg, t * lt.weight + 1.0);
    for (const auto& ps : p_.positive) scalar(ps, 1.0);
    std::vector<std::array<double, 4>> m(n_);
    for (const auto& s : p_.psd) {
      const Sym2 v = s.eval(y);
      const double det = v.a * v.c - v.b * v.b;
      const double ia = v.c / det, ib = -v.b / det, ic = v.a / det;
      for (std::size_t j = 0; j < n_; ++j) {
        const Sym2& A = j < s.coef.size() ? s.coef[j] : Sym2{};
        // S^{-1} A, row-major
        m[j] = {ia * A.a + ib * A.b, ia * A.b + ib * A.c, ib * A.a + ic * A.b, ib * A.b + ic * A.c};
        g[j] -= m[j][0] + m[j][3];
      }
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = j; k < n_; ++k) {
          const double tr = m[j][0] * m[k][0] + m[j][1] * m[k][2] + m[j][2] * m[k][1] + m[j][3] * m[k][3];
          h[j * n_ + k] += tr;
          if (k != j) h[k * n_ + j] += tr;
        }
    }
  }

 private:
  const ConcaveProgram& p_;
  std::size_t n_;
};

bool cholesky_solve(std::vector<double> h, std::size_t n, const std::vector<double>& rhs,
                    std::vector<double>& x) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = h[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= h[j * n + k] * h[j * n + k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    h[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = h[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= h[i * n + k] * h[j * n + k];
      h[i * n + j] = s / d;
    }
  }
  x = rhs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= h[i * n + k] * x[k];
    x[i] /= h[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= h[k * n + i] * x[k];
    x[i] /= h[i * n + i];
  }
  return true;
}

}  // namespace

BarrierResult maximize(const ConcaveProgram& prog, std::vector<double> y, const BarrierOptions& opts) {
  require(y.size() == prog.dim, ErrorCode::DimensionMismatch, "barrier start has wrong dimension");
  require(prog.strictly_feasible(y), ErrorCode::InvalidArgument, "barrier start is not strictly feasible");
  const std::size_t n = prog.dim;
  Barrier bar(prog);
  const double m = static_cast<double>(bar.degree());
  BarrierResult res;
  double t = opts.t0;
  std::vector<double> g, h, step, trial(n);
  while (true) {
    for (int inner = 0; inner < 200 && res.newton_steps < opts.max_newton; ++inner) {
      bar.derivatives(y, t, g, h);
      std::vector<double> rhs(n);
      for (std::size_t j = 0; j < n; ++j) rhs[j] = -g[j];
      double jitter = 0.0;
      double diag_scale = 0.0;
      for (std::size_t j = 0; j < n; ++j) diag_scale = std::max(diag_scale, std::abs(h[j * n + j]));
      while (!cholesky_solve(h, n, rhs, step)) {
        jitter = jitter == 0.0 ? 1e-14 * std::max(diag_scale, 1e-300) : jitter * 10.0;
        for (std::size_t j = 0; j < n; ++j) h[j * n + j] += jitter;
        if (jitter > diag_scale) break;
      }
      ++res.newton_steps;
      double dec = 0.0;
      for (std::size_t j = 0; j < n; ++j) dec -= g[j] * step[j];
      if (!(dec > 0.0) || dec * 0.5 <= 1e-10) break;
      const Eval cur = bar.value(y, t);
      double alpha = 1.0;
      bool moved = false;
      while (alpha > 1e-20) {
        for (std::size_t j = 0; j < n; ++j) trial[j] = y[j] + alpha * step[j];
        const Eval e = bar.value(trial, t);
        if (e.ok && e.phi <= cur.phi - 0.25 * alpha * dec) {
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      y = trial;
    }
    const double f = prog.objective(y);
    if (m / t <= opts.gap_tol * std::max(1.0, std::abs(f))) {
      res.converged = true;
      break;
    }
    if (res.newton_steps >= opts.max_newton) break;
    t *= opts.growth;
  }
  res.objective = prog.objective(y);
  res.gap_bound = m / t;
  res.y = std::move(y);
  return res;
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  require(n > 0, ErrorCode::InvalidArgument, "Nelder-Mead needs at least one variable");
  std::vector<std::vector<double>> s(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += opts.initial_step;
  std::vector<double> fv(n + 1);
  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(s[i]);
  std::vector<std::size_t> idx(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  while (res.evals < opts.max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];
    double size = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) size = std::max(size, std::abs(s[idx[i]][j] - s[best][j]));
    if (std::abs(fv[worst] - fv[best]) <= opts.ftol * (std::abs(fv[best]) + 1e-300) && size <= opts.xtol)
      break;
    if (size <= 1e-15) break;
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += s[idx[i]][j] / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - s[worst][j]);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - s[worst][j]);
      const double fe = eval(xe);
      if (fe < fr) {
        s[worst] = xe;
        fv[worst] = fe;
      } else {
        s[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      s[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    for (std::size_t j = 0; j < n; ++j)
      xc[j] = outside ? centroid[j] + 0.5 * (xr[j] - centroid[j]) : centroid[j] + 0.5 * (s[worst][j] - centroid[j]);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[worst])) {
      s[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      auto& x = s[idx[i]];
      for (std::size_t j = 0; j < n; ++j) x[j] = s[best][j] + 0.5 * (x[j] - s[best][j]);
      fv[idx[i]] = eval(x);
    }
  }
  const std::size_t b = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  res.x = s[b];
  res.value = fv[b];
  return res;
}

}  // namespace sdirng::optim
