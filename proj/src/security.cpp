// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/security.hpp"

#include <array>
#include <cmath>
#include <string>

#include "sdirng/error.hpp"

namespace sdirng {

namespace {

ComplexMatrix reduced(const Dilation& d, const ComplexMatrix& rho, const ComplexMatrix& op) {
  const ComplexMatrix joint = kron(rho, ComplexMatrix::identity(d.dim_m)) * op;
  return partial_trace(joint, {2, d.dim_m}, {1}).hermitian_part();
}

const Dilation& round_at(std::span<const Dilation> rounds, std::size_t i) {
  return rounds.size() == 1 ? rounds[0] : rounds[i];
}

void check_rounds(std::span<const Dilation> rounds, const MultiRoundState& state) {
  state.validate();
  require(rounds.size() == 1 || rounds.size() == state.rounds, ErrorCode::DimensionMismatch,
          "need one dilation per round or a single shared one");
  for (const auto& d : rounds)
    require(d.dim_m == state.dim_m, ErrorCode::DimensionMismatch, "dilation memory dimension mismatch");
}

}  // namespace

ComplexMatrix q_operator(const Dilation& d, int a, int x) {
  require((a == 0 || a == 1) && (x == 0 || x == 1), ErrorCode::InvalidArgument, "Q index out of range");
  return 0.5 * reduced(d, d.rho[x], d.projector[a]);
}

ComplexMatrix g_operator(const Dilation& d, const DualCertificate& c) {
  ComplexMatrix g = -1.0 * ComplexMatrix::identity(d.dim_m);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) g += (2.0 * c.nu[a][x]) * reduced(d, d.rho[x], d.projector[a]);
  return g.hermitian_part();
}

ComplexMatrix c_operator(const Dilation& d) {
  return reduced(d, d.rho[0], d.projector[0] - d.projector[1]);
}

OperatorBoundCheck check_operator_bound(const Dilation& d, const DualCertificate& c) {
  const double f = d.overlap_fidelity();
  require(f >= c.delta - 1e-9, ErrorCode::Precondition,
          "dilation fidelity " + std::to_string(f) + " is below the certified overlap " +
              std::to_string(c.delta));
  const ComplexMatrix g = g_operator(d, c);
  const ComplexMatrix cc = c_operator(d);
  OperatorBoundCheck out;
  out.margin_plus = min_eigenvalue(g - cc);
  out.margin_minus = min_eigenvalue(g + cc);
  return out;
}

std::size_t MultiRoundState::total_dim() const {
  std::size_t d = 1;
  for (std::size_t i = 0; i < rounds; ++i) d *= dim_m;
  return d;
}

void MultiRoundState::validate(double tol) const {
  require(rounds >= 1, ErrorCode::InvalidArgument, "multi-round state needs at least one round");
  require(sigma.square() && sigma.rows() == total_dim(), ErrorCode::DimensionMismatch,
          "joint memory state has wrong dimension");
  require(sigma.is_hermitian(tol), ErrorCode::NotHermitian, "joint memory state is not Hermitian");
  require(std::abs(sigma.trace() - 1.0) <= tol, ErrorCode::InvalidArgument,
          "joint memory state does not have unit trace");
  require(is_psd(sigma, tol), ErrorCode::InvalidArgument, "joint memory state is not PSD");
}

MultiRoundState iid_state(const ComplexMatrix& sigma_m, std::size_t rounds) {
  require(rounds >= 1, ErrorCode::InvalidArgument, "need at least one round");
  MultiRoundState s;
  s.rounds = rounds;
  s.dim_m = sigma_m.rows();
  s.sigma = sigma_m;
  for (std::size_t i = 1; i < rounds; ++i) s.sigma = kron(s.sigma, sigma_m);
  return s;
}

ComplexMatrix product_operator(std::span<const ComplexMatrix> ops) {
  require(!ops.empty(), ErrorCode::InvalidArgument, "empty operator product");
  ComplexMatrix p = ops[0];
  for (std::size_t i = 1; i < ops.size(); ++i) p = kron(p, ops[i]);
  return p;
}

ComplexMatrix CqState::eve_marginal() const {
  require(!blocks.empty(), ErrorCode::InvalidArgument, "empty cq state");
  ComplexMatrix e = blocks[0];
  for (std::size_t k = 1; k < blocks.size(); ++k) e += blocks[k];
  return e;
}

CqState exact_cq_state(std::span<const Dilation> rounds, const MultiRoundState& state,
                       const ExtractorFunction& g) {
  check_rounds(rounds, state);
  require(g.n_r() == state.rounds, ErrorCode::DimensionMismatch, "extractor input length != rounds");
  const std::size_t dim = state.total_dim();
  require(dim <= kMaxExactDim, ErrorCode::SizeLimit, "joint memory too large for the exact cq state");
  const std::size_t n = state.rounds;
  std::vector<std::array<ComplexMatrix, 2>> x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < 2; ++a) x[i][a] = 2.0 * q_operator(round_at(rounds, i), a, 0);

  CqState cq;
  cq.m = g.m();
  std::vector<ComplexMatrix> y(std::size_t{1} << g.m(), ComplexMatrix(dim, dim));
  std::vector<ComplexMatrix> ops(n);
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) {
    for (std::size_t i = 0; i < n; ++i) ops[i] = x[i][(s >> i) & 1];
    y[g(s)] += product_operator(ops);
  }
  // purification sum_i sqrt(l_i) |e_i>|i>
  const auto sd = eigh(state.sigma);
  const ComplexMatrix& v = sd.eigenvectors;
  const ComplexMatrix vd = v.adjoint();
  std::vector<double> root(dim);
  for (std::size_t i = 0; i < dim; ++i) root[i] = std::sqrt(std::max(0.0, sd.eigenvalues[i]));
  cq.blocks.reserve(y.size());
  for (const auto& yk : y) {
    const ComplexMatrix t = (vd * yk * v).transpose();
    ComplexMatrix b(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) b(i, j) = root[i] * t(i, j) * root[j];
    cq.blocks.push_back(b.hermitian_part());
  }
  return cq;
}

CqState exact_xor_state(std::span<const Dilation> rounds, const MultiRoundState& state) {
  return exact_cq_state(rounds, state, ExtractorFunction::parity(static_cast<unsigned>(state.rounds)));
}

double trace_distance_to_ideal(const CqState& cq) {
  const ComplexMatrix e = cq.eve_marginal();
  const double w = std::ldexp(1.0, -static_cast<int>(cq.m));
  double s = 0.0;
  for (const auto& b : cq.blocks) s += trace_norm(b - w * e);
  return 0.5 * s;
}

namespace {

constexpr std::size_t kMaxOperatorDim = 1024;

double product_expectation(std::span<const Dilation> rounds, const MultiRoundState& state,
                           const DualCertificate& c, double shift) {
  check_rounds(rounds, state);
  require(state.total_dim() <= kMaxOperatorDim, ErrorCode::SizeLimit, "joint memory too large");
  std::vector<ComplexMatrix> ops(state.rounds);
  for (std::size_t i = 0; i < state.rounds; ++i) {
    ops[i] = g_operator(round_at(rounds, i), c);
    if (shift != 0.0) ops[i] += shift * ComplexMatrix::identity(state.dim_m);
  }
  return (state.sigma * product_operator(ops)).trace().real();
}

}  // namespace

double epsilon_single_bit(std::span<const Dilation> rounds, const MultiRoundState& state,
                          const DualCertificate& c) {
  return 0.5 * product_expectation(rounds, state, c, 0.0);
}

MultiBitBound epsilon_multi_bit(std::span<const Dilation> rounds, const MultiRoundState& state,
                                const DualCertificate& c, unsigned m) {
  require(m >= 1, ErrorCode::InvalidArgument, "output length must be positive");
  const double n = static_cast<double>(state.rounds);
  MultiBitBound out;
  out.value = n * n * std::sqrt(std::ldexp(1.0, static_cast<int>(m) - static_cast<int>(state.rounds) - 2)) *
              product_expectation(rounds, state, c, 1.0);
  out.vacuous = out.value >= 1.0;
  return out;
}

double epsilon_single_bit_iid(double pstar, std::size_t n_r) {
  return 0.5 * std::pow(2.0 * pstar - 1.0, static_cast<double>(n_r));
}

double epsilon_multi_bit_iid(double pstar, std::size_t n_r, unsigned m) {
  const double n = static_cast<double>(n_r);
  return n * n * std::sqrt(std::ldexp(1.0, static_cast<int>(m) - static_cast<int>(n_r) - 2)) *
         std::pow(2.0 * pstar, n);
}

}  // namespace sdirng
