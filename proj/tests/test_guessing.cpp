// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "sdirng/dilation.hpp"
#include "sdirng/error.hpp"
#include "sdirng/guessing.hpp"

using namespace sdirng;

TEST_CASE("trivial certificate is feasible everywhere") {
  for (double d = 0; d <= 1.0001; d += 0.05) {
    const auto c = trivial_certificate(OverlapBound(std::min(d, 1.0)));
    CHECK(verify_dual_feasible(c, 1e-12));
    CHECK(dual_objective(c, family_behavior(OverlapBound(std::min(d, 1.0)))) == doctest::Approx(1.0));
  }
}

TEST_CASE("K operators are Hermitian and index checked") {
  const auto s = solve_dual(family_behavior(OverlapBound(0.4)), OverlapBound(0.4));
  for (int a = 0; a < 2; ++a)
    for (int l = 0; l < 2; ++l) CHECK(k_operator(s.cert, a, l).is_hermitian(1e-12));
  CHECK_THROWS_AS(k_operator(s.cert, 2, 0), Error);
  CHECK(feasibility_margin(s.cert) == doctest::Approx(s.margin));
}

TEST_CASE("endpoints are deterministic") {
  for (double d : {0.0, 1.0}) {
    const auto b = family_behavior(OverlapBound(d));
    CHECK(solve_dual(b, OverlapBound(d)).objective == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(solve_primal_oracle(b, OverlapBound(d)).objective == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("dual certificates are strictly feasible and bound the trivial guess") {
  for (double d = 0.05; d < 0.96; d += 0.1)
    for (double g : {0.0, 0.02, 0.2}) {
      const auto b = apply_uniform_noise(family_behavior(OverlapBound(d)), NoiseRate(g));
      const auto s = solve_dual(b, OverlapBound(d));
      CHECK(s.margin > 0);
      CHECK(verify_dual_feasible(s.cert, 1e-9));
      CHECK(s.objective >= std::max(b(0, 0), b(1, 0)) - 1e-9);
      CHECK(s.objective <= 1.0 + 1e-7);
      CHECK(predictability_bound(s.cert, b) == doctest::Approx(2 * s.objective - 1));
    }
}

TEST_CASE("primal never exceeds the dual") {
  Rng rng(17);
  for (int i = 0; i < 6; ++i) {
    const double d = 0.1 + 0.8 * rng.uniform();
    const auto fx = fixture_dilation(OverlapBound(d), 3.0 * rng.uniform(), 0.3 * rng.uniform());
    const auto b = behavior_from_dilation(fx);
    const auto dual = solve_dual(b, OverlapBound(d));
    PrimalOptions po;
    po.multistarts = 8;
    const auto primal = solve_primal_oracle(b, OverlapBound(d), po);
    CHECK(primal.residual < 1e-6);
    CHECK(primal.objective <= dual.objective + 1e-8);
    CHECK(dual.objective - primal.objective <= 2e-3);
  }
}

TEST_CASE("fully mixed data is perfectly guessable") {
  const auto b = apply_uniform_noise(family_behavior(OverlapBound(0.5)), NoiseRate(1.0));
  CHECK(solve_dual(b, OverlapBound(0.5)).objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("guessing curve dips at one half") {
  double prev = 2;
  for (double d = 0.0; d <= 0.5001; d += 0.1) {
    const double v = solve_dual(family_behavior(OverlapBound(d)), OverlapBound(d)).objective;
    CHECK(v <= prev + 1e-6);
    prev = v;
  }
  for (double d = 0.6; d <= 1.0001; d += 0.1) {
    const double v = solve_dual(family_behavior(OverlapBound(std::min(d, 1.0))), OverlapBound(std::min(d, 1.0))).objective;
    CHECK(v >= prev - 1e-6);
    prev = v;
  }
}

TEST_CASE("invalid solver options") {
  DualOptions o;
  o.nu_bound = 1.0;
  CHECK_THROWS_AS(solve_dual(family_behavior(OverlapBound(0.5)), OverlapBound(0.5), o), Error);
  PrimalOptions p;
  p.multistarts = 0;
  CHECK_THROWS_AS(solve_primal_oracle(family_behavior(OverlapBound(0.5)), OverlapBound(0.5), p), Error);
}

TEST_CASE("behavior outside the set has no primal point at the endpoint") {
  // delta = 1 forces p(.|0) = p(.|1)
  const auto b = Behavior::from_table(0.2, 0.8, 0.7, 0.3);
  try {
    solve_primal_oracle(b, OverlapBound(1.0));
    FAIL("expected Infeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Infeasible);
  }
}
