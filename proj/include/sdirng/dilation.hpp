// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>

#include "sdirng/behavior.hpp"
#include "sdirng/linalg.hpp"
#include "sdirng/rng.hpp"

namespace sdirng {

// Qubit source states rho^x, a memory state sigma on M and a two-outcome
// projective measurement on S (x) M, with S the first tensor factor.
struct Dilation {
  std::size_t dim_m = 1;
  std::array<ComplexMatrix, 2> rho;
  std::array<ComplexMatrix, 2> projector;
  ComplexMatrix sigma;

  void validate(double tol = 1e-9) const;
  double overlap_fidelity() const;
};

Behavior behavior_from_dilation(const Dilation& d);

// dim_m = 2, canonical states, sigma = diag(1-w, w) and
// Pi^0 = P_theta (x) |0><0| + (1 - P_theta) (x) |1><1|.
Dilation fixture_dilation(OverlapBound delta, double theta, double flip_weight);
// reproduces apply_uniform_noise(family_behavior(delta), gamma)
Dilation family_fixture(OverlapBound delta, NoiseRate gamma);

ComplexMatrix random_state(std::size_t dim, Rng& rng);
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
ComplexMatrix random_projector(std::size_t dim, std::size_t rank, Rng& rng);
// random dilation with overlap_fidelity() >= min_fidelity
Dilation random_dilation(std::size_t dim_m, double min_fidelity, Rng& rng);

}  // namespace sdirng
