// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/guessing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdirng/error.hpp"
#include "sdirng/optim.hpp"

namespace sdirng {

ComplexMatrix k_operator(const DualCertificate& c, int a, int lambda) {
  require((a == 0 || a == 1) && (lambda == 0 || lambda == 1), ErrorCode::InvalidArgument,
          "K operator index out of range");
  const auto states = CanonicalStates::from_overlap(OverlapBound(c.delta));
  const ComplexMatrix p0 = states.projector(0), p1 = states.projector(1);
  const ComplexMatrix& h = c.h[lambda];
  require(h.rows() == 2 && h.cols() == 2, ErrorCode::DimensionMismatch, "H must be 2x2");
  const cplx half_tr = 0.5 * h.trace();
  ComplexMatrix k = h - half_tr * ComplexMatrix::identity(2);
  k += (static_cast<double>(a == lambda) - c.nu[a][0]) * p0;
  k -= c.nu[a][1] * p1;
  return k.hermitian_part();
}

double feasibility_margin(const DualCertificate& c) {
  double m = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 2; ++a)
    for (int l = 0; l < 2; ++l) m = std::min(m, -max_eigenvalue(k_operator(c, a, l)));
  return m;
}

bool verify_dual_feasible(const DualCertificate& c, double tol) {
  for (const auto& h : c.h)
    if (h.rows() != 2 || h.cols() != 2 || !h.is_hermitian(1e-12)) return false;
  for (const auto& row : c.nu)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  for (int a = 0; a < 2; ++a)
    for (int l = 0; l < 2; ++l)
      if (!is_psd(-1.0 * k_operator(c, a, l), tol)) return false;
  return true;
}

double dual_objective(const DualCertificate& c, const Behavior& b) {
  double s = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) s += c.nu[a][x] * b.p[a][x];
  return s;
}

double predictability_bound(const DualCertificate& c, const Behavior& b) {
  return 2.0 * dual_objective(c, b) - 1.0;
}

DualCertificate trivial_certificate(OverlapBound delta) {
  DualCertificate c;
  c.delta = delta.value();
  c.nu = {{{1.0, 0.0}, {1.0, 0.0}}};
  return c;
}

namespace {

// y = [nu00, nu01, nu10, nu11, h0, c0, h1, c1]; slack S = -K
optim::AffineSym2 dual_slack(int a, int lambda, double d) {
  const double s = std::sqrt(d * (1.0 - d));
  optim::AffineSym2 m;
  m.constant = {-static_cast<double>(a == lambda), 0.0, 0.0};
  m.coef.assign(8, {});
  m.coef[2 * a] = {1.0, 0.0, 0.0};
  m.coef[2 * a + 1] = {d, s, 1.0 - d};
  m.coef[4 + 2 * lambda] = {-1.0, 0.0, 1.0};
  m.coef[5 + 2 * lambda] = {0.0, -1.0, 0.0};
  return m;
}

}  // namespace

DualSolution solve_dual(const Behavior& b, OverlapBound delta, const DualOptions& opts) {
  b.validate(1e-9);
  require(opts.nu_bound > 2.0, ErrorCode::InvalidArgument, "nu bound too small");
  const double d = delta.value();
  DualSolution out;
  if (d == 0.0 || d == 1.0) {
    out.cert = trivial_certificate(delta);
    out.objective = dual_objective(out.cert, b);
    out.margin = feasibility_margin(out.cert);
    return out;
  }
  optim::ConcaveProgram prog;
  prog.dim = 8;
  prog.linear.assign(8, 0.0);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) prog.linear[2 * a + x] = -b.p[a][x];
  for (int a = 0; a < 2; ++a)
    for (int l = 0; l < 2; ++l) prog.psd.push_back(dual_slack(a, l, d));
  for (int j = 0; j < 4; ++j) {
    optim::AffineScalar up{opts.nu_bound, std::vector<double>(8, 0.0)};
    up.coef[j] = -1.0;
    optim::AffineScalar lo{opts.nu_bound, std::vector<double>(8, 0.0)};
    lo.coef[j] = 1.0;
    prog.positive.push_back(up);
    prog.positive.push_back(lo);
  }
  std::vector<double> start;
  for (double c = 2.0; c <= 0.5 * opts.nu_bound && start.empty(); c *= 2.0)
    for (double h : {0.0, 0.25, 0.5 * c}) {
      std::vector<double> y{c, c, c, c, h, 0.0, h, 0.0};
      if (prog.min_slack(y) > 1e-9) {
        start = y;
        break;
      }
    }
  require(!start.empty(), ErrorCode::Infeasible, "no strictly feasible dual start within the nu bound");
  optim::BarrierOptions bo;
  bo.gap_tol = opts.gap_tol;
  const auto res = optim::maximize(prog, start, bo);
  DualCertificate& c = out.cert;
  c.delta = d;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) c.nu[a][x] = res.y[2 * a + x];
  for (int l = 0; l < 2; ++l) {
    const double h = res.y[4 + 2 * l], off = res.y[5 + 2 * l];
    c.h[l] = ComplexMatrix::real(2, 2, {h, off, off, -h});
  }
  // pull toward the start point until the margin is comfortably positive
  DualCertificate c0;
  c0.delta = d;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) c0.nu[a][x] = start[2 * a + x];
  for (int l = 0; l < 2; ++l) c0.h[l] = ComplexMatrix::real(2, 2, {start[4 + 2 * l], 0.0, 0.0, -start[4 + 2 * l]});
  const double m0 = feasibility_margin(c0);
  double mc = feasibility_margin(c);
  const double target = 1e-9;
  for (int iter = 0; iter < 60 && mc < target; ++iter) {
    const double theta = std::min(1.0, 2.0 * (target - mc) / (m0 - mc));
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < 2; ++x) c.nu[a][x] = (1.0 - theta) * c.nu[a][x] + theta * c0.nu[a][x];
    for (int l = 0; l < 2; ++l) c.h[l] = ((1.0 - theta) * c.h[l] + theta * c0.h[l]).hermitian_part();
    mc = feasibility_margin(c);
  }
  out.objective = dual_objective(c, b);
  out.margin = mc;
  out.newton_steps = res.newton_steps;
  require(out.margin > 0.0, ErrorCode::Internal, "dual certificate is not strictly feasible");
  require(verify_dual_feasible(c, 1e-9), ErrorCode::Internal, "dual certificate failed verification");
  return out;
}

namespace {

struct PrimalPoint {
  double q0;
  double f[3];  // F0 = N_{0|0}
  double g[3];  // F1 = N_{0|1}
};

PrimalPoint expand(std::span<const double> v, const Behavior& b, double d) {
  const double s = std::sqrt(d * (1.0 - d));
  PrimalPoint p;
  p.q0 = v[0];
  p.f[0] = v[1];
  p.f[1] = v[2];
  p.f[2] = v[3];
  p.g[0] = b.p[0][0] - v[1];
  p.g[1] = v[4];
  const double f_on_psi1 = d * p.f[0] + 2.0 * s * p.f[1] + (1.0 - d) * p.f[2];
  p.g[2] = (b.p[0][1] - f_on_psi1 - d * p.g[0] - 2.0 * s * p.g[1]) / (1.0 - d);
  return p;
}

double worst_violation(const PrimalPoint& p, double* total, double* squares) {
  const double q[2] = {p.q0, 1.0 - p.q0};
  const double* f[2] = {p.f, p.g};
  double worst = 0.0, acc = 0.0, acc2 = 0.0;
  for (int l = 0; l < 2; ++l) {
    const double e1 = sym2_min_eigenvalue(f[l][0], f[l][1], f[l][2]);
    const double e2 = sym2_min_eigenvalue(q[l] - f[l][0], -f[l][1], q[l] - f[l][2]);
    for (double e : {e1, e2})
      if (e < 0.0) {
        worst = std::max(worst, -e);
        acc -= e;
        acc2 += e * e;
      }
  }
  if (total) *total = acc;
  if (squares) *squares = acc2;
  return worst;
}

double primal_value(const PrimalPoint& p) { return p.f[0] + (1.0 - p.q0) - p.g[0]; }

PrimalSolution primal_at_orthogonal(const Behavior& b) {
  PrimalSolution out;
  const ComplexMatrix e0 = ComplexMatrix::diagonal({1.0, 0.0}), e1 = ComplexMatrix::diagonal({0.0, 1.0});
  for (int a = 0; a < 2; ++a)
    for (int l = 0; l < 2; ++l)
      out.n[a][l] = (static_cast<double>(a == l) * b.p[l][0]) * e0 + (b.p[l][0] * b.p[a][1]) * e1;
  out.objective = 1.0;
  return out;
}

}  // namespace

PrimalSolution solve_primal_oracle(const Behavior& b, OverlapBound delta, const PrimalOptions& opts) {
  b.validate(1e-9);
  const double d = delta.value();
  if (d == 0.0) return primal_at_orthogonal(b);
  if (d == 1.0) {
    require(std::abs(b.p[0][0] - b.p[0][1]) <= 1e-12, ErrorCode::Infeasible,
            "identical states cannot produce an input-dependent behavior");
    PrimalSolution out;
    for (int a = 0; a < 2; ++a)
      for (int l = 0; l < 2; ++l)
        out.n[a][l] = (static_cast<double>(a == l) * b.p[l][0]) * ComplexMatrix::identity(2);
    out.objective = 1.0;
    return out;
  }
  require(opts.multistarts >= 1, ErrorCode::InvalidArgument, "need at least one start");
  // quadratic penalty stages then exact (L1) penalty stages
  const double mus[] = {1e2, 1e4, 1e6, 1e2, 1e3, 1e4, 1e5, 1e6};
  const double steps[] = {0.1, 0.02, 0.005, 1e-3, 1e-3, 5e-4, 2e-4, 1e-4};
  Rng rng(opts.seed);
  double best_score = std::numeric_limits<double>::infinity();
  std::vector<double> best;
  for (int start = 0; start < opts.multistarts; ++start) {
    const double q0 = rng.uniform();
    std::vector<double> x{q0, q0 * rng.uniform(), 0.5 * (rng.uniform() - 0.5), q0 * rng.uniform(),
                          0.5 * (rng.uniform() - 0.5)};
    double score = 0.0;
    for (int st = 0; st < 8; ++st) {
      const double mu = mus[st];
      const bool exact = st >= 3;
      auto f = [&](std::span<const double> v) {
        const PrimalPoint p = expand(v, b, d);
        double sum, sq;
        worst_violation(p, &sum, &sq);
        return -primal_value(p) + mu * (exact ? sum : sq);
      };
      optim::NelderMeadOptions no;
      no.max_evals = opts.evals_per_stage;
      no.initial_step = steps[st];
      auto r = optim::nelder_mead(f, x, no);
      for (int again = 0; again < 2; ++again) {
        no.initial_step *= 0.3;
        r = optim::nelder_mead(f, r.x, no);
      }
      x = r.x;
      score = r.value;
    }
    if (score < best_score) {
      best_score = score;
      best = x;
    }
  }
  const PrimalPoint p = expand(best, b, d);
  PrimalSolution out;
  out.objective = primal_value(p);
  out.residual = worst_violation(p, nullptr, nullptr);
  const double q[2] = {p.q0, 1.0 - p.q0};
  const double* f[2] = {p.f, p.g};
  for (int l = 0; l < 2; ++l) {
    out.n[0][l] = ComplexMatrix::real(2, 2, {f[l][0], f[l][1], f[l][1], f[l][2]});
    out.n[1][l] = q[l] * ComplexMatrix::identity(2) - out.n[0][l];
  }
  return out;
}

}  // namespace sdirng
