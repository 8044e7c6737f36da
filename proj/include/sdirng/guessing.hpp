// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "sdirng/behavior.hpp"
#include "sdirng/linalg.hpp"

namespace sdirng {

using Table2 = std::array<std::array<double, 2>, 2>;

// nu[a][x] and one 2x2 Hermitian H per guess lambda
struct DualCertificate {
  Table2 nu{};
  std::array<ComplexMatrix, 2> h{ComplexMatrix(2, 2), ComplexMatrix(2, 2)};
  double delta = 0.5;
};

// K_{a|lambda} = [a==lambda] P0 - nu[a][0] P0 - nu[a][1] P1 + H_lambda - Tr(H_lambda)/2
ComplexMatrix k_operator(const DualCertificate& c, int a, int lambda);
// min over (a, lambda) of -lambda_max(K), positive when strictly feasible
double feasibility_margin(const DualCertificate& c);
bool verify_dual_feasible(const DualCertificate& c, double tol);
double dual_objective(const DualCertificate& c, const Behavior& b);
// 2 sum nu p - 1, an upper bound on |p(0|0) - p(1|0)| over Q_delta
double predictability_bound(const DualCertificate& c, const Behavior& b);

// nu[a][0] = 1, nu[a][1] = 0, H = 0; feasible for every delta with objective 1
DualCertificate trivial_certificate(OverlapBound delta);

struct DualOptions {
  double nu_bound = 1e5;
  double gap_tol = 1e-11;
};

struct DualSolution {
  DualCertificate cert;
  double objective = 0;
  double margin = 0;
  int newton_steps = 0;
};

DualSolution solve_dual(const Behavior& b, OverlapBound delta, const DualOptions& opts = {});

struct PrimalOptions {
  int multistarts = 32;
  std::uint64_t seed = 0x5eed;
  int evals_per_stage = 3000;
};

// N[a][lambda]
struct PrimalSolution {
  std::array<std::array<ComplexMatrix, 2>, 2> n;
  double objective = 0;
  double residual = 0;  // worst PSD or data-constraint violation
};

// Derivative-free reference solver for the primal guessing problem.
PrimalSolution solve_primal_oracle(const Behavior& b, OverlapBound delta, const PrimalOptions& opts = {});

}  // namespace sdirng
