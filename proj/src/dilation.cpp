// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/dilation.hpp"

#include <cmath>
#include <string>

#include "sdirng/error.hpp"

namespace sdirng {

namespace {

void check_state(const ComplexMatrix& r, std::size_t dim, double tol, const char* name) {
  require(r.square() && r.rows() == dim, ErrorCode::DimensionMismatch,
          std::string(name) + " has wrong dimension");
  require(r.is_hermitian(tol), ErrorCode::NotHermitian, std::string(name) + " is not Hermitian");
  require(std::abs(r.trace() - 1.0) <= tol, ErrorCode::InvalidArgument,
          std::string(name) + " does not have unit trace");
  require(is_psd(r, tol), ErrorCode::InvalidArgument, std::string(name) + " is not PSD");
}

}  // namespace

void Dilation::validate(double tol) const {
  require(dim_m >= 1, ErrorCode::DimensionMismatch, "memory dimension must be positive");
  check_state(rho[0], 2, tol, "rho^0");
  check_state(rho[1], 2, tol, "rho^1");
  check_state(sigma, dim_m, tol, "sigma");
  const std::size_t n = 2 * dim_m;
  for (int a = 0; a < 2; ++a) {
    const auto& p = projector[a];
    require(p.square() && p.rows() == n, ErrorCode::DimensionMismatch, "projector has wrong dimension");
    require(p.is_hermitian(tol), ErrorCode::NotHermitian, "projector is not Hermitian");
    require(max_abs_diff(p * p, p) <= tol, ErrorCode::InvalidArgument, "projector is not idempotent");
  }
  require(max_abs_diff(projector[0] + projector[1], ComplexMatrix::identity(n)) <= tol,
          ErrorCode::InvalidArgument, "projectors do not sum to identity");
}

double Dilation::overlap_fidelity() const { return fidelity(rho[0], rho[1]); }

Behavior behavior_from_dilation(const Dilation& d) {
  Behavior b;
  for (int x = 0; x < 2; ++x) {
    const ComplexMatrix joint = kron(d.rho[x], d.sigma);
    for (int a = 0; a < 2; ++a) b.p[a][x] = (joint * d.projector[a]).trace().real();
  }
  return b;
}

Dilation fixture_dilation(OverlapBound delta, double theta, double flip_weight) {
  require(flip_weight >= 0.0 && flip_weight <= 1.0, ErrorCode::InvalidArgument,
          "flip weight must lie in [0,1]");
  const auto states = CanonicalStates::from_overlap(delta);
  Dilation d;
  d.dim_m = 2;
  d.rho[0] = states.projector(0);
  d.rho[1] = states.projector(1);
  d.sigma = ComplexMatrix::diagonal({1.0 - flip_weight, flip_weight});
  const std::array<cplx, 2> phi{std::cos(theta), std::sin(theta)};
  const ComplexMatrix p = ComplexMatrix::outer(phi);
  const ComplexMatrix id2 = ComplexMatrix::identity(2);
  d.projector[0] = kron(p, ComplexMatrix::diagonal({1.0, 0.0})) +
                   kron(id2 - p, ComplexMatrix::diagonal({0.0, 1.0}));
  d.projector[1] = ComplexMatrix::identity(4) - d.projector[0];
  return d;
}

Dilation family_fixture(OverlapBound delta, NoiseRate gamma) {
  const double dv = delta.value();
  return fixture_dilation(delta, std::atan2(std::sqrt(1.0 - dv), std::sqrt(dv)), 0.5 * gamma.value());
}

ComplexMatrix random_state(std::size_t dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (auto& x : g.data()) x = cplx(rng.normal(), rng.normal());
  ComplexMatrix r = (g * g.adjoint()).hermitian_part();
  r *= 1.0 / r.trace().real();
  return r;
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  // Gram-Schmidt on a Ginibre matrix, column by column
  ComplexMatrix u(dim, dim);
  for (auto& x : u.data()) x = cplx(rng.normal(), rng.normal());
  for (std::size_t c = 0; c < dim; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < c; ++k) {
        cplx dot = 0.0;
        for (std::size_t r = 0; r < dim; ++r) dot += std::conj(u(r, k)) * u(r, c);
        for (std::size_t r = 0; r < dim; ++r) u(r, c) -= dot * u(r, k);
      }
    double nrm = 0.0;
    for (std::size_t r = 0; r < dim; ++r) nrm += std::norm(u(r, c));
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < dim; ++r) u(r, c) /= nrm;
  }
  return u;
}

ComplexMatrix random_projector(std::size_t dim, std::size_t rank, Rng& rng) {
  require(rank <= dim, ErrorCode::InvalidArgument, "projector rank exceeds dimension");
  const ComplexMatrix u = random_unitary(dim, rng);
  ComplexMatrix p(dim, dim);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) p(i, j) += u(i, k) * std::conj(u(j, k));
  return p.hermitian_part();
}

Dilation random_dilation(std::size_t dim_m, double min_fidelity, Rng& rng) {
  require(dim_m >= 1, ErrorCode::DimensionMismatch, "memory dimension must be positive");
  require(min_fidelity >= 0.0 && min_fidelity <= 1.0, ErrorCode::InvalidArgument,
          "fidelity target must lie in [0,1]");
  Dilation d;
  d.dim_m = dim_m;
  // pure states with overlap kappa >= target, then common depolarizing
  const double kappa = min_fidelity + (1.0 - min_fidelity) * rng.uniform();
  const ComplexMatrix u = random_unitary(2, rng);
  const double phase = 2.0 * M_PI * rng.uniform();
  std::array<cplx, 2> v0{u(0, 0), u(1, 0)};
  std::array<cplx, 2> v1;
  for (int i = 0; i < 2; ++i)
    v1[i] = std::sqrt(kappa) * u(i, 0) + std::sqrt(1.0 - kappa) * std::polar(1.0, phase) * u(i, 1);
  const double mix = rng.bernoulli(0.5) ? 0.3 * rng.uniform() : 0.0;
  const ComplexMatrix half = ComplexMatrix::diagonal({0.5, 0.5});
  d.rho[0] = ((1.0 - mix) * ComplexMatrix::outer(v0) + mix * half).hermitian_part();
  d.rho[1] = ((1.0 - mix) * ComplexMatrix::outer(v1) + mix * half).hermitian_part();
  d.sigma = random_state(dim_m, rng);
  const std::size_t n = 2 * dim_m;
  const std::size_t rank = static_cast<std::size_t>(rng.below(n + 1));
  d.projector[0] = random_projector(n, rank, rng);
  d.projector[1] = (ComplexMatrix::identity(n) - d.projector[0]).hermitian_part();
  return d;
}

}  // namespace sdirng
