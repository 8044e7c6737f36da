// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "doctest.h"
#include "sdirng/error.hpp"
#include "sdirng/protocol.hpp"
#include "sdirng/security.hpp"

using namespace sdirng;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

ProtocolConfig config(std::uint64_t n, double pe, ExtractorType t, double delta = 0.5, std::uint64_t seed = 1) {
  ProtocolConfig c;
  c.n = n;
  c.p_e = pe;
  c.extractor = t;
  c.delta = delta;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  auto c = config(10, 0.5, ExtractorType::MultiBit);
  CHECK_NOTHROW(c.validate());
  c.n = 0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::InvalidArgument);
  c = config(10, 1.0, ExtractorType::MultiBit);
  CHECK_THROWS_AS(c.validate(), Error);
  c = config(10, 0.5, ExtractorType::MultiBit);
  c.epsilon = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.epsilon = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = config(10, 0.5, ExtractorType::MultiBit, 1.2);
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("extractor names") {
  CHECK(extractor_type_from_string("xor") == ExtractorType::SingleBit);
  CHECK(extractor_type_from_string("single") == ExtractorType::SingleBit);
  CHECK(extractor_type_from_string("mul") == ExtractorType::MultiBit);
  CHECK(std::string(to_string(ExtractorType::MultiBit)) == "multi");
  CHECK_THROWS_AS(extractor_type_from_string("nope"), Error);
}

TEST_CASE("rounds are reproducible and self-consistent") {
  const auto b = apply_uniform_noise(family_behavior(OverlapBound(0.4)), NoiseRate(0.05));
  const auto cfg = config(5000, 0.3, ExtractorType::MultiBit, 0.4, 77);
  const auto t = run_rounds(cfg, b);
  const auto u = run_rounds(cfg, b);
  CHECK(t.raw == u.raw);
  CHECK(t.z == u.z);
  CHECK(t.labels.size() == cfg.n);
  CHECK(t.n_e() + t.n_r() == cfg.n);
  EstimationCounts c;
  for (auto z : t.z) ++c.c[z.a][z.x];
  CHECK(c == t.counts);
  const auto cs = simulate_counts(cfg, b);
  CHECK(cs.counts == t.counts);
  CHECK(cs.n_r == t.n_r());
  CHECK(std::abs(static_cast<double>(t.n_e()) / cfg.n - 0.3) < 0.03);
  auto other = cfg;
  other.seed = 78;
  CHECK(run_rounds(other, b).raw != t.raw);
}

TEST_CASE("output length rule") {
  using T = ExtractorType;
  CHECK(output_length(T::MultiBit, 0.99, 100, true) == 0);
  CHECK(output_length(T::MultiBit, 7.8, 100, true) == 7);
  CHECK(output_length(T::MultiBit, 500, 100, true) == 99);
  CHECK(output_length(T::MultiBit, 500, 100, false) == 100);
  CHECK(output_length(T::MultiBit, 50, 0, true) == 0);
  CHECK(output_length(T::SingleBit, 0, 10, true) == 1);
  CHECK(output_length(T::SingleBit, -1e-3, 10, true) == 0);
  CHECK(output_length(T::SingleBit, 1e9, 10, true) == 1);
  CHECK(output_length(T::MultiBit, std::nan(""), 10, true) == 0);
}

TEST_CASE("length solutions are certified") {
  const auto b = family_behavior(OverlapBound(0.5));
  for (auto t : {ExtractorType::MultiBit, ExtractorType::SingleBit}) {
    const auto cfg = config(7000, 0.95, t);
    const auto cs = simulate_counts(cfg, b);
    const auto l = solve_length(t, cs.counts, cs.n_r, cfg);
    CHECK(l.feasible);
    CHECK(l.residual <= 1e-9);
    CHECK(verify_dual_feasible(l.certificate, 1e-9));
    CHECK(l.objective == doctest::Approx(length_objective(t, cs.counts, cs.n_r, l.alpha, l.beta, cfg.epsilon)));
    CHECK(l.m_out == output_length(t, l.objective, cs.n_r, true));
    CHECK(constraint_residual(t, l, cfg.p_e) == doctest::Approx(l.residual));
    CHECK(l.m_out > 0);
  }
}

TEST_CASE("constraint residual detects perturbations") {
  const auto cfg = config(2000, 0.9, ExtractorType::MultiBit);
  const auto cs = simulate_counts(cfg, family_behavior(OverlapBound(0.5)));
  auto l = solve_length(cfg.extractor, cs.counts, cs.n_r, cfg);
  l.alpha[0][0] += 0.1;
  CHECK(constraint_residual(cfg.extractor, l, cfg.p_e) > 1e-3);
}

TEST_CASE("deterministic behaviour gives nothing") {
  for (auto t : {ExtractorType::MultiBit, ExtractorType::SingleBit}) {
    const auto cfg = config(3000, 0.5, t, 0.0);
    const auto cs = simulate_counts(cfg, family_behavior(OverlapBound(0.0)));
    const auto l = solve_length(t, cs.counts, cs.n_r, cfg);
    CHECK(l.m_out == 0);
  }
}

TEST_CASE("no raw rounds") {
  const auto cfg = config(10, 0.5, ExtractorType::MultiBit);
  EstimationCounts c;
  c.c[0][0] = 10;
  const auto l = solve_length(cfg.extractor, c, 0, cfg);
  CHECK(l.m_out == 0);
  CHECK_FALSE(l.feasible);
}

TEST_CASE("weighted program accepts only valid weights") {
  Table2 w{};
  w[0][0] = 1;
  CHECK_THROWS_AS(maximize_weighted(ExtractorType::MultiBit, w, 1.0, 1.0, OverlapBound(0.5)), Error);
  w[0][0] = -1;
  CHECK_THROWS_AS(maximize_weighted(ExtractorType::MultiBit, w, 1.0, 0.5, OverlapBound(0.5)), Error);
}

TEST_CASE("weighted program is invariant under weight scaling") {
  const auto b = apply_uniform_noise(family_behavior(OverlapBound(0.5)), NoiseRate(0.01));
  for (auto t : {ExtractorType::MultiBit, ExtractorType::SingleBit}) {
    Table2 unit{};
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < 2; ++x) unit[a][x] = 0.5 * 0.97 * b.p[a][x];
    const auto base = maximize_weighted(t, unit, 0.03, 0.97, OverlapBound(0.5));
    for (double scale : {1e3, 1e5, 1e7}) {
      Table2 w{};
      for (int a = 0; a < 2; ++a)
        for (int x = 0; x < 2; ++x) w[a][x] = scale * unit[a][x];
      const auto big = maximize_weighted(t, w, 0.03 * scale, 0.97, OverlapBound(0.5));
      CHECK(big.value / scale == doctest::Approx(base.value).epsilon(1e-6));
      CHECK(big.beta == doctest::Approx(base.beta).epsilon(1e-6));
    }
  }
  Table2 zero{};
  CHECK_THROWS_AS(maximize_weighted(ExtractorType::MultiBit, zero, 0.0, 0.5, OverlapBound(0.5)), Error);
}

TEST_CASE("multi-bit run checks the extractor") {
  const auto b = family_behavior(OverlapBound(0.5));
  auto cfg = config(7000, 0.95, ExtractorType::MultiBit);
  CHECK(code_of([&] { run_protocol(cfg, b, nullptr); }) == ErrorCode::Precondition);
  auto g = ExtractorFunction::parity(4);
  CHECK(code_of([&] { run_protocol(cfg, b, &g); }) == ErrorCode::Precondition);
}

TEST_CASE("small multi-bit run with a matching extractor") {
  const auto b = family_behavior(OverlapBound(0.5));
  ProtocolConfig cfg = config(3000, 0.995, ExtractorType::MultiBit);
  cfg.epsilon = 0.5;
  // find a seed whose run has a short raw key
  for (std::uint64_t seed = 1; seed < 200; ++seed) {
    cfg.seed = seed;
    const auto cs = simulate_counts(cfg, b);
    if (cs.n_r < 4 || cs.n_r > 12) continue;
    const auto l = solve_length(cfg.extractor, cs.counts, cs.n_r, cfg);
    if (l.m_out == 0) continue;
    auto g = construct_random_extractor(static_cast<unsigned>(cs.n_r), static_cast<unsigned>(l.m_out), 1000, 3);
    const auto run = run_protocol(cfg, b, &g.g);
    REQUIRE(run.output.has_value());
    CHECK(*run.output == g.g.apply(run.transcript.raw));
    CHECK(*run.output < (1u << l.m_out));
    return;
  }
  MESSAGE("no seed produced a short multi-bit run");
}

TEST_CASE("single-bit run outputs the parity") {
  const auto b = family_behavior(OverlapBound(0.5));
  const auto cfg = config(2000, 0.9, ExtractorType::SingleBit);
  const auto run = run_protocol(cfg, b, nullptr);
  REQUIRE(run.output.has_value());
  CHECK(*run.output == xor_extract(run.transcript.raw));
}

TEST_CASE("transcripts round-trip") {
  const auto b = apply_uniform_noise(family_behavior(OverlapBound(0.3)), NoiseRate(0.1));
  const auto cfg = config(1237, 0.4, ExtractorType::SingleBit, 0.3, 5);
  const auto t = run_rounds(cfg, b);
  const auto path = fs::temp_directory_path() / "sdirng_test_t.bin";
  save_transcript(cfg, t, path);
  const auto f = load_transcript(path);
  CHECK(f.config.n == cfg.n);
  CHECK(f.config.p_e == cfg.p_e);
  CHECK(f.config.epsilon == cfg.epsilon);
  CHECK(f.config.delta == cfg.delta);
  CHECK(f.config.seed == cfg.seed);
  CHECK(f.config.extractor == cfg.extractor);
  CHECK(f.transcript.labels == t.labels);
  CHECK(f.transcript.z == t.z);
  CHECK(f.transcript.raw == t.raw);
  CHECK(f.transcript.counts == t.counts);
  {
    std::ofstream o(path, std::ios::binary | std::ios::app);
    o.put(0);
  }
  CHECK(code_of([&] { load_transcript(path); }) == ErrorCode::Io);
  save_transcript(cfg, t, path);
  fs::resize_file(path, fs::file_size(path) - 3);
  CHECK(code_of([&] { load_transcript(path); }) == ErrorCode::Io);
  fs::remove(path);
  CHECK(code_of([&] { load_transcript(path); }) == ErrorCode::Io);
}

TEST_CASE("exhaustive security stays below epsilon") {
  const auto d = family_fixture(OverlapBound(0.3), NoiseRate(0.05));
  for (double eps : {1.0, 0.5}) {
    auto cfg = config(4, 0.5, ExtractorType::SingleBit, 0.3);
    cfg.epsilon = eps;
    MultiRoundState st = iid_state(d.sigma, 4);
    const auto r = exhaustive_security(cfg, d, st.sigma, nullptr);
    CHECK(r.transcripts > 0);
    CHECK(r.average_distance <= eps + 1e-8);
    CHECK(r.output_probability <= 1.0 + 1e-12);
  }
  auto cfg = config(7, 0.5, ExtractorType::SingleBit, 0.3);
  CHECK(code_of([&] { exhaustive_security(cfg, d, iid_state(d.sigma, 7).sigma, nullptr); }) ==
        ErrorCode::SizeLimit);
}

TEST_CASE("exhaustive security probabilities sum to one") {
  const auto d = family_fixture(OverlapBound(0.5), NoiseRate(0.1));
  auto cfg = config(3, 0.6, ExtractorType::MultiBit, 0.5);
  cfg.epsilon = 1.0;
  std::map<std::pair<unsigned, unsigned>, ExtractorFunction> cache;
  ExtractorProvider provider = [&](unsigned n_r, unsigned m) -> const ExtractorFunction* {
    auto key = std::make_pair(n_r, m);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, construct_random_extractor(n_r, m, 1000, 1).g).first;
    return &it->second;
  };
  const auto r = exhaustive_security(cfg, d, iid_state(d.sigma, 3).sigma, provider);
  // every (t, z) combination: sum over t of 4^{n_e}
  CHECK(r.transcripts == 125);
  CHECK(r.average_distance <= 1.0 + 1e-8);
}
