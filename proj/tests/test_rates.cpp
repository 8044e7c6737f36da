// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sdirng/error.hpp"
#include "sdirng/guessing.hpp"
#include "sdirng/rates.hpp"

using namespace sdirng;

namespace {

ProtocolConfig config(std::uint64_t n, double pe, double delta = 0.5) {
  ProtocolConfig c;
  c.n = n;
  c.p_e = pe;
  c.delta = delta;
  return c;
}

}  // namespace

TEST_CASE("finite rate is reproducible across worker counts") {
  const auto b = family_behavior(OverlapBound(0.5));
  const auto cfg = config(7000, 0.95);
  const auto a = finite_rate(cfg, b, 6, 1);
  const auto c = finite_rate(cfg, b, 6, 3);
  CHECK(a.mean_rate == c.mean_rate);
  CHECK(a.std_error == c.std_error);
  REQUIRE(a.records.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a.records[i].seed == derive_seed(cfg.seed, i));
    CHECK(a.records[i].length.feasible);
    CHECK(a.records[i].length.residual <= 1e-9);
  }
  CHECK(a.mean_rate <= 1.0);
  CHECK(a.std_error >= 0);
}

TEST_CASE("single sample has zero standard error") {
  const auto r = finite_rate(config(7000, 0.95), family_behavior(OverlapBound(0.5)), 1);
  CHECK(r.samples == 1);
  CHECK(r.std_error == 0);
  CHECK_THROWS_AS(finite_rate(config(7000, 0.95), family_behavior(OverlapBound(0.5)), 0), Error);
}

TEST_CASE("deterministic endpoint has zero rate") {
  for (std::uint64_t n : {1000, 20000}) {
    const auto r = finite_rate(config(n, 0.9, 0.0), family_behavior(OverlapBound(0.0)), 3);
    CHECK(r.mean_rate == 0);
  }
}

TEST_CASE("standard error shrinks with more samples") {
  const auto b = family_behavior(OverlapBound(0.5));
  const auto cfg = config(4000, 0.95);
  const auto few = finite_rate(cfg, b, 10);
  const auto many = finite_rate(cfg, b, 90);
  REQUIRE(few.std_error > 0);
  const double ratio = few.std_error / many.std_error;
  CHECK(ratio > 1.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("asymptotic rate endpoints and anchor") {
  CHECK(asymptotic_rate_mul(OverlapBound(0.0)).rate <= 0);
  CHECK(asymptotic_rate_mul(OverlapBound(1.0)).rate <= 0);
  const auto half = asymptotic_rate_mul(OverlapBound(0.5));
  CHECK(half.rate > 0);
  CHECK(half.p_e > 0);
  CHECK(half.p_e < 1);
  CHECK_FALSE(half.scan.empty());
  CHECK(verify_dual_feasible(half.solution.certificate, 1e-9));
}

TEST_CASE("asymptotic rate stays below the single-round min-entropy") {
  for (double d : {0.2, 0.4, 0.5, 0.7}) {
    const auto b = family_behavior(OverlapBound(d));
    const double h = -std::log2(solve_dual(b, OverlapBound(d)).objective);
    CHECK(asymptotic_rate_mul(OverlapBound(d)).rate <= h + 1e-6);
  }
}

TEST_CASE("asymptotic multi-bit rate under delta -> 1 - delta") {
  // matched near the deterministic ends only; the overlap constraint is not relabeling invariant
  for (double d : {0.1, 0.2, 0.3}) {
    const double lo = asymptotic_rate_mul(OverlapBound(d)).rate;
    const double hi = asymptotic_rate_mul(OverlapBound(1 - d)).rate;
    CHECK(std::abs(lo - hi) <= 2e-3);
  }
  const double a = asymptotic_rate_mul(OverlapBound(0.4)).rate, b = asymptotic_rate_mul(OverlapBound(0.6)).rate;
  CHECK(b > a + 2e-3);
}

TEST_CASE("fixed p_e asymptotic rate") {
  const auto b = family_behavior(OverlapBound(0.5));
  const auto s = asymptotic_rate(ExtractorType::MultiBit, b, OverlapBound(0.5), 0.9);
  CHECK(s.p_e == 0.9);
  CHECK(s.rate <= asymptotic_rate_mul(OverlapBound(0.5)).rate + 1e-9);
  CHECK_THROWS_AS(asymptotic_rate(ExtractorType::MultiBit, b, OverlapBound(0.5), 1.0), Error);
}

TEST_CASE("xor minimum p_e") {
  const auto grid = default_pe_grid();
  CHECK(grid.front() == doctest::Approx(0.01));
  CHECK(grid.back() == doctest::Approx(0.99));
  const auto r = xor_asymptotic_min_pe(OverlapBound(0.3), grid);
  REQUIRE(r.has_value());
  CHECK(*r == doctest::Approx(0.01));
  CHECK_FALSE(xor_asymptotic_min_pe(OverlapBound(0.0), grid).has_value());
  CHECK_FALSE(xor_asymptotic_min_pe(OverlapBound(1.0), grid).has_value());
  const auto s = asymptotic_rate(ExtractorType::SingleBit, family_behavior(OverlapBound(0.5)), OverlapBound(0.5), 0.5);
  CHECK(s.rate > kXorPositivityTolerance);
  const std::vector<double> bad{0.5, 0.2};
  CHECK_THROWS_AS(xor_asymptotic_min_pe(OverlapBound(0.3), bad), Error);
  CHECK_THROWS_AS(xor_asymptotic_min_pe(OverlapBound(0.3), std::vector<double>{}), Error);
}

TEST_CASE("tuned p_e lies in range and gives a positive length") {
  const auto b = family_behavior(OverlapBound(0.5));
  auto cfg = config(7000, 0.5);
  const double pe = tuned_pe(b, cfg);
  CHECK(pe > 0);
  CHECK(pe < 1);
  cfg.p_e = pe;
  CHECK(finite_rate(cfg, b, 4).mean_rate > 0);
}

TEST_CASE("sweep kinds and ids") {
  CHECK(sweep_kind_from_string("rate-vs-n-by-gamma") == SweepKind::RateVsNByGamma);
  CHECK(std::string(to_string(SweepKind::PguessVsDelta)) == "pguess-vs-delta");
  CHECK_THROWS_AS(sweep_kind_from_string("x"), Error);
  CHECK(certificate_id("") == "cbf29ce484222325");
  CHECK(certificate_id("a") == "af63dc4c8601ec8c");
}

TEST_CASE("pguess sweep endpoints") {
  SweepSpec s;
  s.kind = SweepKind::PguessVsDelta;
  s.deltas = {0.0, 0.5, 1.0};
  const auto t = sweep(s);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].dual == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.rows[0].primal == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.rows[2].dual == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t.rows[1].dual - t.rows[1].primal <= 2e-3);
  CHECK(t.rows[1].dual >= t.rows[1].primal - 1e-8);
  for (const auto& r : t.rows) CHECK(r.kind == "pguess");
}

TEST_CASE("rate sweep layout and determinism") {
  SweepSpec s;
  s.kind = SweepKind::RateVsNByDelta;
  s.deltas = {0.5};
  s.ns = {2000, 7000};
  s.samples = 3;
  const auto a = sweep(s);
  const auto b = sweep(s);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.rows[0].kind == "asymptotic");
  CHECK(a.rows[1].kind == "finite");
  CHECK(a.rows[1].seed == derive_seed(s.seed, 0));
  CHECK(a.rows[2].seed == derive_seed(s.seed, 1));
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].certificate_id == b.rows[i].certificate_id);
    CHECK(a.rows[i].mean_rate == b.rows[i].mean_rate);
  }
  s.p_e = 0.9;
  s.include_asymptotic = true;
  const auto fixed = sweep(s);
  CHECK(fixed.rows.size() == 2);
  CHECK(fixed.rows[0].p_e == 0.9);
  s.ns.clear();
  CHECK_THROWS_AS(sweep(s), Error);
}

TEST_CASE("full noise leaves no rate") {
  SweepSpec s;
  s.kind = SweepKind::RateVsNByGamma;
  s.gammas = {1.0};
  s.ns = {7000};
  s.samples = 3;
  const auto t = sweep(s);
  for (const auto& r : t.rows)
    if (r.kind == "finite") CHECK(r.mean_rate == 0);
}
