// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/behavior.hpp"

#include <cmath>
#include <string>

#include "sdirng/error.hpp"

namespace sdirng {

OverlapBound::OverlapBound(double value) : value_(value) {
  require(std::isfinite(value) && value >= 0.0 && value <= 1.0, ErrorCode::InvalidArgument,
          "overlap bound must lie in [0,1], got " + std::to_string(value));
}

NoiseRate::NoiseRate(double value) : value_(value) {
  require(std::isfinite(value) && value >= 0.0 && value <= 1.0, ErrorCode::InvalidArgument,
          "noise rate must lie in [0,1], got " + std::to_string(value));
}

void Behavior::validate(double tol) const {
  for (int x = 0; x < 2; ++x) {
    for (int a = 0; a < 2; ++a)
      require(std::isfinite(p[a][x]) && p[a][x] >= -tol && p[a][x] <= 1.0 + tol,
              ErrorCode::InvalidArgument, "behavior entry outside [0,1]");
    require(std::abs(p[0][x] + p[1][x] - 1.0) <= tol, ErrorCode::InvalidArgument,
            "behavior not normalized for x=" + std::to_string(x));
  }
}

Behavior Behavior::from_table(double p00, double p10, double p01, double p11) {
  Behavior b;
  b.p[0][0] = p00;
  b.p[1][0] = p10;
  b.p[0][1] = p01;
  b.p[1][1] = p11;
  b.validate();
  return b;
}

CanonicalStates CanonicalStates::from_overlap(OverlapBound delta) {
  const double d = delta.value();
  CanonicalStates s;
  s.psi[0] = {1.0, 0.0};
  s.psi[1] = {std::sqrt(d), std::sqrt(1.0 - d)};
  return s;
}

ComplexMatrix CanonicalStates::projector(int x) const {
  return ComplexMatrix::outer(std::span<const cplx>(psi[x].data(), 2));
}

Behavior family_behavior(OverlapBound delta) {
  const double d = delta.value();
  return Behavior::from_table(d, 1.0 - d, 1.0, 0.0);
}

Behavior apply_uniform_noise(const Behavior& b, NoiseRate gamma) {
  b.validate(1e-9);
  const double g = gamma.value();
  Behavior out;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) out.p[a][x] = (1.0 - g) * b.p[a][x] + 0.5 * g;
  return out;
}

int sample_outcome(const Behavior& b, int x, Rng& rng) {
  require(x == 0 || x == 1, ErrorCode::InvalidArgument, "input x must be 0 or 1");
  return rng.bernoulli(b.p[1][x]) ? 1 : 0;
}

}  // namespace sdirng
