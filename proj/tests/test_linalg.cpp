// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "sdirng/dilation.hpp"
#include "sdirng/error.hpp"
#include "sdirng/linalg.hpp"
#include "sdirng/rng.hpp"

using namespace sdirng;

namespace {

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
  return a.hermitian_part();
}

ComplexMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  ComplexMatrix a(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
  return a;
}

}  // namespace

TEST_CASE("kron matches the block formula") {
  const auto a = ComplexMatrix::real(2, 2, {1, 2, 3, 4});
  const auto b = ComplexMatrix::real(2, 2, {0, 5, 6, 7});
  const auto k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 1) == cplx(5));
  CHECK(k(1, 3) == cplx(14));
  CHECK(k(3, 2) == cplx(24));
  CHECK(k(2, 0) == cplx(0));
}

TEST_CASE("products and shapes") {
  const auto a = ComplexMatrix::real(2, 3, {1, 2, 3, 4, 5, 6});
  const auto p = a * a.adjoint();
  CHECK(p(0, 0) == cplx(14));
  CHECK(p(0, 1) == cplx(32));
  CHECK(p(1, 1) == cplx(77));
  CHECK_THROWS_AS(a * a, Error);
  CHECK_THROWS_AS(a + ComplexMatrix(3, 2), Error);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cplx>(3)), Error);
  CHECK_THROWS_AS(a.trace(), Error);
}

TEST_CASE("partial trace agrees with the index-loop reference") {
  Rng rng(7);
  const std::vector<std::size_t> dims{2, 3, 2};
  const auto a = random_matrix(12, 12, rng);
  for (std::vector<std::size_t> keep : {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}}) {
    const auto fast = partial_trace(a, dims, keep);
    const auto slow = oracle::partial_trace(a, dims, keep);
    CHECK(max_abs_diff(fast, slow) < 1e-12);
  }
  const auto x = random_hermitian(2, rng), y = random_hermitian(3, rng);
  CHECK(max_abs_diff(partial_trace(kron(x, y), {2, 3}, {0}), y.trace() * x) < 1e-12);
  CHECK(max_abs_diff(partial_trace(kron(x, y), {2, 3}, {1}), x.trace() * y) < 1e-12);
  CHECK_THROWS_AS(partial_trace(a, {2, 3, 2}, {2, 0}), Error);
  CHECK_THROWS_AS(partial_trace(a, {2, 2, 2}, {0}), Error);
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
  Rng rng(11);
  for (std::size_t n : {1, 2, 3, 5, 8, 16}) {
    const auto a = random_hermitian(n, rng);
    const auto e = eigh(a);
    for (std::size_t i = 1; i < n; ++i) CHECK(e.eigenvalues[i] >= e.eigenvalues[i - 1]);
    const auto& v = e.eigenvectors;
    CHECK(max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(n)) < 1e-10);
    std::vector<double> ev(e.eigenvalues.begin(), e.eigenvalues.end());
    CHECK(max_abs_diff(v * ComplexMatrix::diagonal(ev) * v.adjoint(), a) < 1e-9);
  }
}

TEST_CASE("eigh on degenerate and diagonal input") {
  const auto e = eigh(ComplexMatrix::identity(4));
  for (double l : e.eigenvalues) CHECK(l == doctest::Approx(1.0));
  const auto d = eigh(ComplexMatrix::diagonal({3, -1, 2}));
  CHECK(d.eigenvalues[0] == doctest::Approx(-1));
  CHECK(d.eigenvalues[2] == doctest::Approx(3));
}

TEST_CASE("eigh rejects non-Hermitian input") {
  auto a = ComplexMatrix::real(2, 2, {1, 1, 0, 1});
  try {
    eigh(a);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
}

TEST_CASE("closed-form 2x2 eigenvalues") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    const auto e = eigh(ComplexMatrix::real(2, 2, {a, b, b, c}));
    const double tr = a + c, disc = std::sqrt((a - c) * (a - c) + 4 * b * b);
    CHECK(sym2_min_eigenvalue(a, b, c) == doctest::Approx((tr - disc) / 2).epsilon(1e-12));
    CHECK(sym2_max_eigenvalue(a, b, c) == doctest::Approx((tr + disc) / 2).epsilon(1e-12));
    CHECK(min_eigenvalue(ComplexMatrix::real(2, 2, {a, b, b, c})) == doctest::Approx(e.eigenvalues[0]));
  }
}

TEST_CASE("norms, roots and fidelity") {
  CHECK(trace_norm(ComplexMatrix::diagonal({1, -2})) == doctest::Approx(3));
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto r = random_state(3, rng);
    const auto s = sqrt_psd(r);
    CHECK(max_abs_diff(s * s, r) < 1e-10);
    CHECK(fidelity(r, r) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(is_psd(r, 1e-12));
  }
  const double t = 0.4;
  std::vector<cplx> u{1, 0}, v{std::cos(t), std::sin(t)};
  CHECK(fidelity(ComplexMatrix::outer(u), ComplexMatrix::outer(v)) ==
        doctest::Approx(std::cos(t) * std::cos(t)).epsilon(1e-10));
  CHECK_FALSE(is_psd(ComplexMatrix::diagonal({1, -1e-3}), 1e-9));
}

TEST_CASE("Hermitian helpers") {
  auto a = ComplexMatrix(2, 2);
  a(0, 1) = cplx(1, 2);
  a(1, 0) = cplx(1, -2);
  CHECK(a.is_hermitian());
  a(1, 0) = cplx(1, 2);
  CHECK(a.hermitian_defect() == doctest::Approx(4));
  CHECK(a.hermitian_part().is_hermitian());
}
