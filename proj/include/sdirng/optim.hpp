// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sdirng::optim {

// [[a, b], [b, c]]
struct Sym2 {
  double a = 0, b = 0, c = 0;
};

struct AffineScalar {
  double constant = 0;
  std::vector<double> coef;
  double eval(std::span<const double> y) const;
};

struct AffineSym2 {
  Sym2 constant;
  std::vector<Sym2> coef;
  Sym2 eval(std::span<const double> y) const;
};

struct LogTerm {
  double weight;  // >= 0
  AffineScalar arg;
};

// maximize linear.y + sum w_k log(l_k(y))
// s.t. l_k(y) > 0, positive_j(y) > 0, psd_i(y) > 0 (2x2 LMIs)
struct ConcaveProgram {
  std::size_t dim = 0;
  std::vector<double> linear;
  std::vector<LogTerm> log_terms;
  std::vector<AffineScalar> positive;
  std::vector<AffineSym2> psd;

  double objective(std::span<const double> y) const;
  // smallest slack over every constraint, normalized LMIs by eigenvalue
  double min_slack(std::span<const double> y) const;
  bool strictly_feasible(std::span<const double> y) const { return min_slack(y) > 0.0; }
};

struct BarrierOptions {
  double gap_tol = 1e-10;  // stop once barrier degree / t < gap_tol
  double t0 = 1.0;
  double growth = 12.0;
  int max_newton = 5000;
};

struct BarrierResult {
  std::vector<double> y;
  double objective = 0;
  double gap_bound = 0;
  int newton_steps = 0;
  bool converged = false;
};

// Log-barrier path following with damped Newton centering. start must be
// strictly feasible.
BarrierResult maximize(const ConcaveProgram& prog, std::vector<double> start,
                       const BarrierOptions& opts = {});

struct NelderMeadOptions {
  int max_evals = 4000;
  double initial_step = 0.1;
  double ftol = 1e-14;
  double xtol = 1e-12;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0;
  int evals = 0;
};

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts = {});

}  // namespace sdirng::optim
