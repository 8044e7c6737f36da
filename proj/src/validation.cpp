// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/validation.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>

#include "sdirng/error.hpp"
#include "sdirng/security.hpp"
#include "sdirng/serialize.hpp"

namespace sdirng {

namespace {

struct Fixture {
  double delta;
  Dilation d;
};

Fixture random_fixture(Rng& rng) {
  const double delta = 0.05 + 0.9 * rng.uniform();
  const double theta = M_PI * rng.uniform();
  const double w = 0.3 * rng.uniform();
  return {delta, fixture_dilation(OverlapBound(delta), theta, w)};
}

MultiRoundState fixture_state(const Dilation& d, std::size_t n_r, bool correlated, Rng& rng) {
  if (!correlated) return iid_state(d.sigma, n_r);
  MultiRoundState s;
  s.rounds = n_r;
  s.dim_m = d.dim_m;
  s.sigma = random_state(s.total_dim(), rng);
  return s;
}

Json state_json(const MultiRoundState& s) {
  return Json{{"rounds", s.rounds}, {"dim_m", s.dim_m}, {"sigma", to_json(s.sigma)}};
}

void record(ValidationReport& rep, double value, const std::function<Json()>& instance) {
  const bool worse = rep.instances == 0 || (rep.upper_limit ? value > rep.worst : value < rep.worst);
  ++rep.instances;
  if (worse) rep.worst = value;
  const bool bad = rep.upper_limit ? value > rep.threshold : value < rep.threshold;
  if (bad) {
    if (rep.passed || worse) rep.offending = instance().dump();
    rep.passed = false;
  }
}

}  // namespace

ValidationReport run_validation(const std::string& suite, std::size_t instances, std::uint64_t seed) {
  require(instances >= 1, ErrorCode::InvalidArgument, "need at least one instance");
  ValidationReport rep;
  rep.suite = suite;
  if (suite == "thm1") {
    rep.metric = "min eigenvalue of G -+ C";
    rep.threshold = -1e-8;
    for (std::size_t i = 0; i < instances; ++i) {
      Rng rng(derive_seed(seed, i));
      const double delta = 0.05 + 0.9 * rng.uniform();
      const std::size_t dm = 1 + rng.below(4);
      const Dilation d = random_dilation(dm, delta, rng);
      const auto sol = solve_dual(behavior_from_dilation(d), OverlapBound(delta));
      const double margin = check_operator_bound(d, sol.cert).margin();
      record(rep, margin, [&] { return Json{{"dilation", to_json(d)}, {"certificate", to_json(sol)}}; });
    }
  } else if (suite == "thm2" || suite == "thm3") {
    const bool multi = suite == "thm3";
    rep.metric = "bound minus exact trace distance";
    rep.threshold = -1e-8;
    for (std::size_t i = 0; i < instances; ++i) {
      Rng rng(derive_seed(seed, i));
      const std::size_t n_r = multi ? 2 + i % 4 : 1 + i % 5;
      const Fixture fx = random_fixture(rng);
      const Dilation& d = fx.d;
      const MultiRoundState st = fixture_state(d, n_r, (i / 5) % 2 == 1, rng);
      const auto sol = solve_dual(behavior_from_dilation(d), OverlapBound(fx.delta));
      const Dilation rounds[1] = {d};
      double bound, exact;
      Json extra;
      if (!multi) {
        bound = epsilon_single_bit(rounds, st, sol.cert);
        exact = trace_distance_to_ideal(exact_xor_state(rounds, st));
      } else {
        const unsigned m = 1 + static_cast<unsigned>(rng.below(n_r - 1));
        const auto c = construct_random_extractor(static_cast<unsigned>(n_r), m, 1000, rng.next_u64());
        bound = epsilon_multi_bit(rounds, st, sol.cert, m).value;
        exact = trace_distance_to_ideal(exact_cq_state(rounds, st, c.g));
        extra = Json{{"m", m}, {"table", c.g.table()}};
      }
      record(rep, bound - exact, [&] {
        return Json{{"dilation", to_json(d)}, {"state", state_json(st)}, {"certificate", to_json(sol)},
                    {"bound", bound}, {"exact", exact}, {"extractor", extra}};
      });
    }
  } else if (suite == "thm4") {
    rep.metric = "epsilon minus average distance";
    rep.threshold = -1e-8;
    const double pes[] = {0.3, 0.5, 0.9};
    const double epss[] = {1.0, 0.5, 0.1};
    for (std::size_t i = 0; i < instances; ++i) {
      Rng rng(derive_seed(seed, i));
      ProtocolConfig cfg;
      cfg.n = 3 + i % 3;
      cfg.p_e = pes[rng.below(3)];
      cfg.epsilon = epss[rng.below(3)];
      cfg.extractor = (i % 2) ? ExtractorType::MultiBit : ExtractorType::SingleBit;
      const double delta = 0.1 + 0.8 * rng.uniform();
      cfg.delta = delta;
      const Dilation d = fixture_dilation(OverlapBound(delta), M_PI * rng.uniform(), 0.2 * rng.uniform());
      const MultiRoundState st = fixture_state(d, cfg.n, rng.bernoulli(0.5), rng);
      std::map<std::pair<unsigned, unsigned>, std::unique_ptr<ExtractorFunction>> cache;
      const std::uint64_t gseed = rng.next_u64();
      ExtractorProvider provider = [&](unsigned nr, unsigned m) -> const ExtractorFunction* {
        auto& slot = cache[{nr, m}];
        if (!slot) slot = std::make_unique<ExtractorFunction>(construct_random_extractor(nr, m, 1000, gseed).g);
        return slot.get();
      };
      const auto res = exhaustive_security(cfg, d, st.sigma, provider);
      record(rep, cfg.epsilon - res.average_distance, [&] {
        return Json{{"config", to_json(cfg)}, {"dilation", to_json(d)}, {"state", state_json(st)},
                    {"average_distance", res.average_distance}};
      });
    }
  } else if (suite == "identities") {
    rep.metric = "max identity residual";
    rep.threshold = 1e-10;
    rep.upper_limit = true;
    for (std::size_t i = 0; i < instances; ++i) {
      Rng rng(derive_seed(seed, i));
      const Dilation d = random_dilation(1 + rng.below(4), rng.uniform(), rng);
      DualCertificate c;
      c.delta = 0.5;
      for (auto& row : c.nu)
        for (auto& v : row) v = 4.0 * rng.uniform() - 2.0;
      const auto r = check_identities(d, c);
      record(rep, std::max(r.sum_q, r.g_form),
             [&] { return Json{{"dilation", to_json(d)}, {"certificate", to_json(c)}}; });
    }
  } else {
    fail(ErrorCode::InvalidArgument, "unknown validation suite '" + suite + "'");
  }
  return rep;
}

}  // namespace sdirng
