// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sdirng/error.hpp"
#include "sdirng/extractor.hpp"
#include "sdirng/rng.hpp"

using namespace sdirng;
namespace fs = std::filesystem;

namespace {

ExtractorFunction random_function(unsigned n_r, unsigned m, Rng& rng) {
  std::vector<std::uint32_t> t(std::size_t{1} << n_r);
  for (auto& v : t) v = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << m));
  return ExtractorFunction(n_r, m, t);
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("sdirng_test_" + name); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("fwht matches the definition") {
  Rng rng(1);
  std::vector<std::int64_t> v(16), w(16);
  for (auto& x : v) x = static_cast<std::int64_t>(rng.below(9)) - 4;
  for (std::uint32_t r = 0; r < 16; ++r)
    for (std::uint32_t s = 0; s < 16; ++s) w[r] += (std::popcount(r & s) & 1 ? -1 : 1) * v[s];
  fwht(v);
  CHECK(v == w);
  std::vector<std::int64_t> bad(6);
  CHECK_THROWS_AS(fwht(bad), Error);
}

TEST_CASE("bias spectrum equals the naive sum") {
  Rng rng(2024);
  for (int i = 0; i < 30; ++i) {
    const unsigned n_r = 1 + static_cast<unsigned>(rng.below(8));
    const unsigned m = 1 + static_cast<unsigned>(rng.below(std::min(n_r, 3u)));
    const auto g = random_function(n_r, m, rng);
    const auto sp = bias_spectrum(g);
    for (std::uint32_t k = 0; k < (1u << m); ++k)
      for (std::uint32_t r = 0; r < (1u << n_r); ++r) {
        const auto want = oracle::bias_scaled(g, k, r);
        REQUIRE(sp.scaled_at(k, r) == want);
        CHECK(sp.at(k, r) == doctest::Approx(static_cast<double>(want) / std::ldexp(1.0, n_r + m)));
      }
  }
}

TEST_CASE("constant function fails with the known witness") {
  auto g = ExtractorFunction::constant(5, 5);
  const auto pc = check_property(g);
  CHECK_FALSE(pc.holds);
  CHECK_FALSE(g.verified());
  CHECK(pc.value == doctest::Approx(31));
  CHECK(pc.bound == doctest::Approx(25));
  CHECK(pc.k == 0);
  CHECK(pc.r == 0);
}

TEST_CASE("small inputs always satisfy the bound when m < n_r") {
  Rng rng(5);
  for (unsigned n_r = 2; n_r <= 5; ++n_r)
    for (unsigned m = 1; m < n_r; ++m) {
      auto g = ExtractorFunction::constant(n_r, m);
      CHECK(check_property(g).holds);
      auto h = random_function(n_r, m, rng);
      CHECK(check_property(h).holds);
    }
}

TEST_CASE("parity spectrum") {
  auto g = ExtractorFunction::parity(6);
  const auto sp = bias_spectrum(g);
  // only the all-ones character sees the parity
  for (std::uint32_t r = 1; r < 63; ++r) CHECK(sp.scaled_at(0, r) == 0);
  CHECK(std::llabs(sp.scaled_at(0, 63)) == 64);
  const auto pc = check_property(g);
  CHECK(pc.holds);
  CHECK(pc.value == doctest::Approx(32));
  CHECK(pc.bound == doctest::Approx(36 * std::sqrt(32.0)));
}

TEST_CASE("parallel check agrees with serial") {
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    auto g = random_function(9, 4, rng);
    auto h = g;
    const auto a = check_property(g, 1), b = check_property(h, 4);
    CHECK(a.holds == b.holds);
    CHECK(a.k == b.k);
    CHECK(a.r == b.r);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("random construction is deterministic and verified") {
  const auto a = construct_random_extractor(8, 2, 1000, 9);
  const auto b = construct_random_extractor(8, 2, 1000, 9, 3);
  CHECK(a.g.verified());
  CHECK(a.g.table() == b.g.table());
  CHECK(a.attempts == b.attempts);
  CHECK(a.attempts <= 1000);
  CHECK(code_of([] { construct_random_extractor(5, 6, 3, 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { construct_random_extractor(5, 2, 0, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("apply uses round 1 as the low bit") {
  std::vector<std::uint32_t> t(8);
  for (std::uint32_t s = 0; s < 8; ++s) t[s] = s & 3;
  ExtractorFunction g(3, 2, t);
  const std::uint8_t bits[3] = {1, 0, 1};
  CHECK(g.apply(bits) == 1);
  const std::uint8_t bits2[3] = {0, 1, 1};
  CHECK(g.apply(bits2) == 2);
  const std::uint8_t bad[2] = {0, 1};
  CHECK_THROWS_AS(g.apply(bad), Error);
  const std::uint8_t nonbit[3] = {0, 2, 1};
  CHECK_THROWS_AS(g.apply(nonbit), Error);
  const std::uint8_t raw[5] = {1, 1, 0, 1, 0};
  CHECK(xor_extract(raw) == 1);
}

TEST_CASE("constructor validation") {
  CHECK(code_of([] { ExtractorFunction(0, 1, {}); }) == ErrorCode::SizeLimit);
  CHECK(code_of([] { ExtractorFunction(25, 1, {}); }) == ErrorCode::SizeLimit);
  CHECK(code_of([] { ExtractorFunction(2, 3, std::vector<std::uint32_t>(4)); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ExtractorFunction(2, 1, std::vector<std::uint32_t>(3)); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] { ExtractorFunction(2, 1, {0, 1, 2, 0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("extractor files round-trip") {
  auto c = construct_random_extractor(7, 3, 100, 4);
  const auto path = temp_file("g.bin");
  save_extractor(c.g, path);
  const auto back = load_extractor(path);
  CHECK(back.n_r() == 7);
  CHECK(back.m() == 3);
  CHECK(back.verified());
  CHECK(back.seed() == c.g.seed());
  CHECK(back.table() == c.g.table());
  CHECK(fs::file_size(path) == 4 + 1 + 4 + 4 + 1 + 8 + 4 * 128);
  fs::remove(path);
}

TEST_CASE("corrupt extractor files are rejected") {
  const auto g = ExtractorFunction::parity(4);
  const auto path = temp_file("bad.bin");
  save_extractor(g, path);
  {
    std::ofstream f(path, std::ios::binary | std::ios::app);
    f.put('x');
  }
  CHECK(code_of([&] { load_extractor(path); }) == ErrorCode::Io);
  save_extractor(g, path);
  fs::resize_file(path, fs::file_size(path) - 2);
  CHECK(code_of([&] { load_extractor(path); }) == ErrorCode::Io);
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << "NOPE";
  }
  CHECK(code_of([&] { load_extractor(path); }) == ErrorCode::Io);
  CHECK(code_of([&] { load_extractor(temp_file("missing.bin")); }) == ErrorCode::Io);
  fs::remove(path);
}
