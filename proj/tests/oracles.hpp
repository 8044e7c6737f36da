// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

// Slow reference implementations used only by the tests.
#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "sdirng/dilation.hpp"
#include "sdirng/extractor.hpp"
#include "sdirng/linalg.hpp"
#include "sdirng/security.hpp"

namespace oracle {

using sdirng::ComplexMatrix;
using sdirng::cplx;

// 2^m sum_s [g(s)=k] (-1)^{r.s} - 2^n_r [r=0]
inline std::int64_t bias_scaled(const sdirng::ExtractorFunction& g, std::uint32_t k, std::uint32_t r) {
  std::int64_t acc = 0;
  for (std::uint32_t s = 0; s < (1u << g.n_r()); ++s)
    if (g(s) == k) acc += (std::popcount(r & s) & 1) ? -1 : 1;
  return (acc << g.m()) - (r == 0 ? (std::int64_t{1} << g.n_r()) : 0);
}

// digits of idx in mixed radix dims, first factor most significant
inline std::vector<std::size_t> digits(std::size_t idx, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    d[i] = idx % dims[i];
    idx /= dims[i];
  }
  return d;
}

inline std::size_t index(const std::vector<std::size_t>& d, const std::vector<std::size_t>& dims) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + d[i];
  return idx;
}

inline ComplexMatrix partial_trace(const ComplexMatrix& a, const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> kd;
  for (auto k : keep) kd.push_back(dims[k]);
  std::size_t n = 1;
  for (auto d : kd) n *= d;
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto di = digits(i, dims), dj = digits(j, dims);
      bool diag = true;
      for (std::size_t f = 0; f < dims.size(); ++f) {
        bool kept = false;
        for (auto k : keep) kept = kept || k == f;
        if (!kept && di[f] != dj[f]) diag = false;
      }
      if (!diag) continue;
      std::vector<std::size_t> ri, rj;
      for (auto k : keep) {
        ri.push_back(di[k]);
        rj.push_back(dj[k]);
      }
      out(index(ri, kd), index(rj, kd)) += a(i, j);
    }
  return out;
}

// op on factors (f1, f2) of a space with the given dims, identity elsewhere
inline ComplexMatrix embed_pair(const ComplexMatrix& op, std::size_t f1, std::size_t f2,
                                const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto di = digits(i, dims), dj = digits(j, dims);
      bool rest = true;
      for (std::size_t f = 0; f < dims.size(); ++f)
        if (f != f1 && f != f2 && di[f] != dj[f]) rest = false;
      if (!rest) continue;
      out(i, j) = op(di[f1] * dims[f2] + di[f2], dj[f1] * dims[f2] + dj[f2]);
    }
  return out;
}

// Eve's blocks by explicit Kronecker products on S_1..S_n M_1..M_n E with
// Eve holding sum_j sqrt(l_j) |v_j>|j>, v_j from eigh(sigma).
inline std::vector<ComplexMatrix> literal_cq_blocks(const sdirng::Dilation& d, const sdirng::MultiRoundState& st,
                                                    const std::vector<std::uint32_t>& g, unsigned m) {
  const std::size_t n = st.rounds, dm = d.dim_m, dimM = st.total_dim();
  const auto eig = sdirng::eigh(st.sigma);
  std::vector<cplx> phi(dimM * dimM);
  for (std::size_t j = 0; j < dimM; ++j) {
    const double l = std::max(0.0, eig.eigenvalues[j]);
    for (std::size_t i = 0; i < dimM; ++i) phi[i * dimM + j] += std::sqrt(l) * eig.eigenvectors(i, j);
  }
  ComplexMatrix omega = ComplexMatrix::outer(phi);
  for (std::size_t i = 0; i < n; ++i) omega = sdirng::kron(d.rho[0], omega);
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < n; ++i) dims.push_back(2);
  for (std::size_t i = 0; i < n; ++i) dims.push_back(dm);
  dims.push_back(dimM);
  std::vector<ComplexMatrix> blocks(std::size_t{1} << m, ComplexMatrix(dimM, dimM));
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    ComplexMatrix op = ComplexMatrix::identity(omega.rows());
    for (std::size_t i = 0; i < n; ++i) op = op * embed_pair(d.projector[(s >> i) & 1], i, n + i, dims);
    blocks[g[s]] += partial_trace(op * omega, dims, {2 * n});
  }
  return blocks;
}

}  // namespace oracle
