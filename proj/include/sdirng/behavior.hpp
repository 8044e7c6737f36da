// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "sdirng/linalg.hpp"
#include "sdirng/rng.hpp"

namespace sdirng {

// Lower bound on the overlap between the two prepared states, in [0,1].
class OverlapBound {
 public:
  explicit OverlapBound(double value);
  double value() const { return value_; }

 private:
  double value_;
};

class NoiseRate {
 public:
  explicit NoiseRate(double value);
  double value() const { return value_; }

 private:
  double value_;
};

// p[a][x] = p(a|x)
struct Behavior {
  std::array<std::array<double, 2>, 2> p{};

  double operator()(int a, int x) const { return p[a][x]; }
  // checks entries in [0,1] and per-x normalization within tol
  void validate(double tol = 1e-12) const;
  static Behavior from_table(double p00, double p10, double p01, double p11);
};

// psi0 = |0>, psi1 = sqrt(delta)|0> + sqrt(1-delta)|1>
struct CanonicalStates {
  std::array<std::array<cplx, 2>, 2> psi;

  static CanonicalStates from_overlap(OverlapBound delta);
  ComplexMatrix projector(int x) const;
};

Behavior family_behavior(OverlapBound delta);
Behavior apply_uniform_noise(const Behavior& b, NoiseRate gamma);
// one draw of a ~ p(.|x)
int sample_outcome(const Behavior& b, int x, Rng& rng);

}  // namespace sdirng
