// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"
#include "sdirng/behavior.hpp"
#include "sdirng/dilation.hpp"
#include "sdirng/error.hpp"
#include "sdirng/rng.hpp"

using namespace sdirng;

TEST_CASE("overlap and noise parameters are range checked") {
  CHECK_NOTHROW(OverlapBound(0.0));
  CHECK_NOTHROW(OverlapBound(1.0));
  CHECK_THROWS_AS(OverlapBound(-1e-9), Error);
  CHECK_THROWS_AS(OverlapBound(1.0 + 1e-9), Error);
  CHECK_THROWS_AS(OverlapBound(std::nan("")), Error);
  CHECK_THROWS_AS(NoiseRate(1.5), Error);
}

TEST_CASE("behavior normalization") {
  CHECK_NOTHROW(Behavior::from_table(0.3, 0.7, 1.0, 0.0));
  CHECK_THROWS_AS(Behavior::from_table(0.3, 0.6, 1.0, 0.0), Error);
  CHECK_THROWS_AS(Behavior::from_table(-0.1, 1.1, 1.0, 0.0), Error);
}

TEST_CASE("family behavior and uniform noise") {
  for (double d : {0.0, 0.2, 0.5, 1.0}) {
    const auto b = family_behavior(OverlapBound(d));
    CHECK(b(0, 0) == doctest::Approx(d));
    CHECK(b(1, 0) == doctest::Approx(1 - d));
    CHECK(b(0, 1) == 1.0);
    CHECK(b(1, 1) == 0.0);
    const auto same = apply_uniform_noise(b, NoiseRate(0));
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < 2; ++x) CHECK(same(a, x) == b(a, x));
    const auto flat = apply_uniform_noise(b, NoiseRate(1));
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < 2; ++x) CHECK(flat(a, x) == doctest::Approx(0.5));
    const auto mid = apply_uniform_noise(b, NoiseRate(0.1));
    CHECK(mid(0, 1) == doctest::Approx(0.95));
  }
}

TEST_CASE("canonical states have the requested overlap") {
  for (double d : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const auto s = CanonicalStates::from_overlap(OverlapBound(d));
    const cplx ip = std::conj(s.psi[0][0]) * s.psi[1][0] + std::conj(s.psi[0][1]) * s.psi[1][1];
    CHECK(std::norm(ip) == doctest::Approx(d).epsilon(1e-12));
    CHECK(max_abs_diff(s.projector(0) * s.projector(0), s.projector(0)) < 1e-12);
  }
}

TEST_CASE("family fixture reproduces the noisy family") {
  for (double d : {0.0, 0.15, 0.5, 0.85, 1.0})
    for (double g : {0.0, 0.1, 0.5, 1.0}) {
      const auto fx = family_fixture(OverlapBound(d), NoiseRate(g));
      CHECK_NOTHROW(fx.validate());
      const auto b = behavior_from_dilation(fx);
      const auto want = apply_uniform_noise(family_behavior(OverlapBound(d)), NoiseRate(g));
      for (int a = 0; a < 2; ++a)
        for (int x = 0; x < 2; ++x) CHECK(b(a, x) == doctest::Approx(want(a, x)).epsilon(1e-12));
      CHECK(fx.overlap_fidelity() >= d - 1e-12);
    }
}

TEST_CASE("random dilations are valid and respect the fidelity floor") {
  Rng rng(99);
  for (int i = 0; i < 60; ++i) {
    const std::size_t dm = 1 + i % 4;
    const double f = 0.05 + 0.9 * rng.uniform();
    const auto d = random_dilation(dm, f, rng);
    CHECK_NOTHROW(d.validate());
    CHECK(d.overlap_fidelity() >= f - 1e-9);
    CHECK_NOTHROW(behavior_from_dilation(d).validate(1e-9));
  }
}

TEST_CASE("invalid dilations are rejected") {
  auto d = family_fixture(OverlapBound(0.5), NoiseRate(0.1));
  d.projector[0](0, 0) += 0.1;
  CHECK_THROWS_AS(d.validate(), Error);
  auto e = family_fixture(OverlapBound(0.5), NoiseRate(0.1));
  e.sigma = ComplexMatrix::diagonal({0.7, 0.7});
  CHECK_THROWS_AS(e.validate(), Error);
  CHECK_THROWS_AS(fixture_dilation(OverlapBound(0.5), 0.3, 1.5), Error);
}

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(1, i));
  CHECK(seeds.size() == 1000);
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("rng value ranges and frequencies") {
  Rng r(1);
  int ones = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(r.below(7) < 7);
    ones += r.bernoulli(0.3);
  }
  CHECK(ones / 20000.0 == doctest::Approx(0.3).epsilon(0.05));
  CHECK_THROWS_AS(r.below(0), Error);
  const auto b = Behavior::from_table(0.25, 0.75, 0.9, 0.1);
  int zeros = 0;
  for (int i = 0; i < 20000; ++i) zeros += sample_outcome(b, 0, r) == 0;
  CHECK(zeros / 20000.0 == doctest::Approx(0.25).epsilon(0.06));
  CHECK_THROWS_AS(sample_outcome(b, 2, r), Error);
}
