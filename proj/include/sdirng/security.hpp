// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdirng/dilation.hpp"
#include "sdirng/extractor.hpp"
#include "sdirng/guessing.hpp"
#include "sdirng/linalg.hpp"

namespace sdirng {

// Q^{a,x} = Tr_S[(rho^x (x) 1) Pi^a] / 2 on M
ComplexMatrix q_operator(const Dilation& d, int a, int x);
// G = 2 sum nu_{a,x} Tr_S[(rho^x (x) 1) Pi^a] - 1
ComplexMatrix g_operator(const Dilation& d, const DualCertificate& c);
// C = Tr_S[(rho^0 (x) 1)(Pi^0 - Pi^1)]
ComplexMatrix c_operator(const Dilation& d);

struct OperatorBoundCheck {
  double margin_plus = 0;   // lambda_min(G - C)
  double margin_minus = 0;  // lambda_min(G + C)
  double margin() const { return margin_plus < margin_minus ? margin_plus : margin_minus; }
};

// G >= +-C for a certificate; throws Precondition when the dilation's
// fidelity is below c.delta - 1e-9.
OperatorBoundCheck check_operator_bound(const Dilation& d, const DualCertificate& c);

// Joint memory state over n rounds, each of dimension dim_m.
struct MultiRoundState {
  std::size_t rounds = 0;
  std::size_t dim_m = 1;
  ComplexMatrix sigma;

  void validate(double tol = 1e-9) const;
  std::size_t total_dim() const;
};

MultiRoundState iid_state(const ComplexMatrix& sigma_m, std::size_t rounds);

inline constexpr std::size_t kMaxExactDim = 128;

// Classical-quantum output state: blocks[k] = unnormalized Eve state for
// output k, Eve holding a purification of the joint memory.
struct CqState {
  unsigned m = 0;
  std::vector<ComplexMatrix> blocks;
  ComplexMatrix eve_marginal() const;
};

// rounds has one dilation per round or a single one used for every round.
// All rounds use input x = 0.
CqState exact_cq_state(std::span<const Dilation> rounds, const MultiRoundState& state,
                       const ExtractorFunction& g);
// single-bit case (parity of all raw bits)
CqState exact_xor_state(std::span<const Dilation> rounds, const MultiRoundState& state);

double trace_distance_to_ideal(const CqState& cq);

// (1/2) Tr[sigma prod_i G_i]
double epsilon_single_bit(std::span<const Dilation> rounds, const MultiRoundState& state,
                          const DualCertificate& c);

struct MultiBitBound {
  double value = 0;
  bool vacuous = false;  // value >= 1
};

// n_r^2 sqrt(2^{m - n_r - 2}) Tr[sigma prod_i (1 + G_i)]
MultiBitBound epsilon_multi_bit(std::span<const Dilation> rounds, const MultiRoundState& state,
                                const DualCertificate& c, unsigned m);

// closed forms for sigma = sigma_M^{(x) n_r} with P* = Tr[sigma_M (1+G)]/2
double epsilon_single_bit_iid(double pstar, std::size_t n_r);
double epsilon_multi_bit_iid(double pstar, std::size_t n_r, unsigned m);

// product over rounds of per-round operators, rounds ordered as tensor factors
ComplexMatrix product_operator(std::span<const ComplexMatrix> ops);

}  // namespace sdirng
