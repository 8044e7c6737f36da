// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/protocol.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <tuple>

#include "sdirng/error.hpp"
#include "sdirng/optim.hpp"
#include "sdirng/security.hpp"

namespace sdirng {

const char* to_string(ExtractorType t) { return t == ExtractorType::SingleBit ? "single" : "multi"; }

ExtractorType extractor_type_from_string(const std::string& s) {
  if (s == "single" || s == "xor" || s == "single-bit") return ExtractorType::SingleBit;
  if (s == "multi" || s == "mul" || s == "multi-bit") return ExtractorType::MultiBit;
  fail(ErrorCode::InvalidArgument, "unknown extractor type '" + s + "' (expected single or multi)");
}

void ProtocolConfig::validate() const {
  require(n >= 1, ErrorCode::InvalidArgument, "number of rounds must be positive");
  require(std::isfinite(p_e) && p_e > 0.0 && p_e < 1.0, ErrorCode::InvalidArgument,
          "estimation probability must lie in (0,1)");
  require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon <= 1.0, ErrorCode::InvalidArgument,
          "epsilon must lie in (0,1]");
  OverlapBound check(delta);
  (void)check;
}

namespace {

template <typename Sink>
void simulate(const ProtocolConfig& cfg, const Behavior& b, Sink&& sink) {
  cfg.validate();
  b.validate(1e-9);
  Rng rng(cfg.seed);
  const double pr = cfg.p_r();
  for (std::uint64_t i = 0; i < cfg.n; ++i) {
    if (rng.uniform() < pr) {
      sink(RoundLabel::RawKey, 0, sample_outcome(b, 0, rng));
    } else {
      const int x = rng.bernoulli(0.5) ? 1 : 0;
      sink(RoundLabel::Estimation, x, sample_outcome(b, x, rng));
    }
  }
}

}  // namespace

ProtocolTranscript run_rounds(const ProtocolConfig& cfg, const Behavior& b) {
  ProtocolTranscript t;
  t.labels.reserve(cfg.n);
  simulate(cfg, b, [&](RoundLabel l, int x, int a) {
    t.labels.push_back(l);
    if (l == RoundLabel::RawKey) {
      t.raw.push_back(static_cast<std::uint8_t>(a));
    } else {
      t.z.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(x)});
      ++t.counts.c[a][x];
    }
  });
  return t;
}

CountsOnly simulate_counts(const ProtocolConfig& cfg, const Behavior& b) {
  CountsOnly out;
  simulate(cfg, b, [&](RoundLabel l, int x, int a) {
    if (l == RoundLabel::RawKey)
      ++out.n_r;
    else
      ++out.counts.c[a][x];
  });
  return out;
}

double length_objective(ExtractorType t, const EstimationCounts& counts, std::uint64_t n_r,
                        const Table2& alpha, double beta, double epsilon) {
  double f = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x)
      if (counts.c[a][x] > 0) f += static_cast<double>(counts.c[a][x]) * alpha[a][x];
  const double nr = static_cast<double>(n_r);
  f -= 2.0 * std::log2(1.0 / epsilon);
  if (t == ExtractorType::MultiBit) {
    f += beta * nr;
    if (n_r > 0) f -= 4.0 * std::log2(nr);
  } else {
    f += (beta - 1.0) * nr;
  }
  return f;
}

double constraint_residual(ExtractorType t, const LengthSolution& s, double p_e) {
  const double pr = 1.0 - p_e;
  const double g = pr * std::exp2(0.5 * (s.beta - 1.0));
  double worst = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) {
      const double nu = s.certificate.nu[a][x];
      const double lhs = (t == ExtractorType::MultiBit ? 4.0 * g * nu : g * (4.0 * nu - 1.0)) +
                         p_e * std::exp2(0.5 * s.alpha[a][x]);
      worst = std::max(worst, std::abs(lhs - 1.0));
    }
  return worst;
}

std::uint64_t output_length(ExtractorType t, double objective, std::uint64_t n_r, bool cap_constructible) {
  if (n_r == 0 || !std::isfinite(objective)) return 0;
  if (t == ExtractorType::SingleBit) return objective >= 0.0 ? 1 : 0;
  if (objective < 1.0) return 0;
  const std::uint64_t cap = cap_constructible ? n_r - 1 : n_r;
  const double fl = std::floor(objective);
  return fl >= static_cast<double>(cap) ? cap : static_cast<std::uint64_t>(fl);
}

namespace {

// y = [s, w00, w01, w10, w11, h0, c0, h1, c1] with s = p_r 2^{(beta-1)/2},
// w = s nu, T = s (H - Tr H / 2). Objective in bits without constants.
optim::ConcaveProgram weighted_program(ExtractorType t, const Table2& weights, double raw_weight, double d) {
  const double sq = std::sqrt(d * (1.0 - d));
  const double bits = 2.0 / std::log(2.0);
  optim::ConcaveProgram p;
  p.dim = 9;
  p.linear.assign(9, 0.0);
  for (int a = 0; a < 2; ++a)
    for (int l = 0; l < 2; ++l) {
      optim::AffineSym2 m;
      m.coef.assign(9, {});
      m.coef[0] = {-static_cast<double>(a == l), 0.0, 0.0};
      m.coef[1 + 2 * a] = {1.0, 0.0, 0.0};
      m.coef[2 + 2 * a] = {d, sq, 1.0 - d};
      m.coef[5 + 2 * l] = {-1.0, 0.0, 1.0};
      m.coef[6 + 2 * l] = {0.0, -1.0, 0.0};
      p.psd.push_back(m);
    }
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) {
      optim::AffineScalar arg{1.0, std::vector<double>(9, 0.0)};
      arg.coef[1 + 2 * a + x] = -4.0;
      if (t == ExtractorType::SingleBit) arg.coef[0] = 1.0;
      p.log_terms.push_back({bits * weights[a][x], arg});
    }
  optim::AffineScalar s_pos{0.0, std::vector<double>(9, 0.0)};
  s_pos.coef[0] = 1.0;
  p.log_terms.push_back({bits * raw_weight, s_pos});
  return p;
}

std::vector<double> program_start(const optim::ConcaveProgram& p) {
  for (double c = 2.0; c <= 1e8; c *= 2.0)
    for (double h : {0.0, 0.25, 0.5 * c}) {
      const double s = 1.0 / (16.0 * c);
      std::vector<double> y{s, c * s, c * s, c * s, c * s, h * s, 0.0, h * s, 0.0};
      if (p.min_slack(y) > 1e-12) return y;
    }
  fail(ErrorCode::Internal, "no strictly feasible start for the length program");
}

}  // namespace

WeightedSolution maximize_weighted(ExtractorType t, const Table2& weights, double raw_weight, double p_e,
                                   OverlapBound delta) {
  require(p_e > 0.0 && p_e < 1.0, ErrorCode::InvalidArgument, "estimation probability must lie in (0,1)");
  for (const auto& row : weights)
    for (double w : row) require(std::isfinite(w) && w >= 0.0, ErrorCode::InvalidArgument, "negative weight");
  require(std::isfinite(raw_weight) && raw_weight >= 0.0, ErrorCode::InvalidArgument, "negative raw weight");
  const double d = delta.value();
  const double p_r = 1.0 - p_e;
  double total = raw_weight;
  for (const auto& row : weights)
    for (double w : row) total += w;
  require(total > 0.0, ErrorCode::InvalidArgument, "all weights are zero");
  Table2 unit{};
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) unit[a][x] = weights[a][x] / total;
  const auto prog = weighted_program(t, unit, raw_weight / total, d);
  optim::BarrierOptions bo;
  bo.gap_tol = 1e-11;
  const auto res = optim::maximize(prog, program_start(prog), bo);
  const auto& y = res.y;
  const double s = y[0];
  WeightedSolution out;
  auto& c = out.certificate;
  c.delta = d;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) c.nu[a][x] = y[1 + 2 * a + x] / s;
  for (int l = 0; l < 2; ++l) {
    const double h = y[5 + 2 * l] / s, off = y[6 + 2 * l] / s;
    c.h[l] = ComplexMatrix::real(2, 2, {h, off, off, -h});
  }
  out.beta = 1.0 + 2.0 * std::log2(s / p_r);
  out.value = raw_weight * (t == ExtractorType::MultiBit ? out.beta : out.beta - 1.0);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) {
      const double w = y[1 + 2 * a + x];
      const double arg = t == ExtractorType::MultiBit ? 1.0 - 4.0 * w : 1.0 - 4.0 * w + s;
      out.alpha[a][x] = 2.0 * std::log2(arg / p_e);
      if (weights[a][x] > 0.0) out.value += weights[a][x] * out.alpha[a][x];
    }
  out.converged = res.converged;
  return out;
}

LengthSolution solve_length(ExtractorType t, const EstimationCounts& counts, std::uint64_t n_r,
                            const ProtocolConfig& cfg) {
  cfg.validate();
  LengthSolution out;
  out.certificate.delta = cfg.delta;
  if (n_r == 0) {
    out.diagnostic = "no raw-key rounds";
    return out;
  }
  Table2 w{};
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) w[a][x] = static_cast<double>(counts.c[a][x]);
  const auto ws = maximize_weighted(t, w, static_cast<double>(n_r), cfg.p_e, OverlapBound(cfg.delta));
  out.alpha = ws.alpha;
  out.beta = ws.beta;
  out.certificate = ws.certificate;
  out.objective = length_objective(t, counts, n_r, out.alpha, out.beta, cfg.epsilon);
  out.residual = constraint_residual(t, out, cfg.p_e);
  out.feasible = verify_dual_feasible(out.certificate, 1e-9) && out.residual <= 1e-9;
  if (!out.feasible) {
    out.diagnostic = "optimizer returned a point that failed certification";
    return out;
  }
  out.m_out = output_length(t, out.objective, n_r, cfg.cap_constructible);
  if (!ws.converged) out.diagnostic = "barrier stopped before the gap target";
  return out;
}

ProtocolRun run_protocol(const ProtocolConfig& cfg, const Behavior& b, const ExtractorFunction* g) {
  ProtocolRun run;
  run.transcript = run_rounds(cfg, b);
  run.length = solve_length(cfg.extractor, run.transcript.counts, run.transcript.n_r(), cfg);
  if (run.length.m_out == 0) return run;
  if (cfg.extractor == ExtractorType::SingleBit) {
    run.output = xor_extract(run.transcript.raw);
    return run;
  }
  require(g != nullptr, ErrorCode::Precondition, "multi-bit output requires an extractor");
  require(g->n_r() == run.transcript.n_r() && g->m() == run.length.m_out, ErrorCode::Precondition,
          "extractor shape (" + std::to_string(g->n_r()) + "," + std::to_string(g->m()) +
              ") does not match (n_r, m_out) = (" + std::to_string(run.transcript.n_r()) + "," +
              std::to_string(run.length.m_out) + ")");
  require(g->verified(), ErrorCode::Precondition, "extractor has not been verified");
  run.output = g->apply(run.transcript.raw);
  return run;
}

IdentityResiduals check_identities(const Dilation& d, const DualCertificate& c) {
  ComplexMatrix sum(d.dim_m, d.dim_m), form(d.dim_m, d.dim_m);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) {
      const ComplexMatrix q = q_operator(d, a, x);
      sum += q;
      form += (4.0 * c.nu[a][x] - 1.0) * q;
    }
  IdentityResiduals r;
  r.sum_q = max_abs_diff(sum, ComplexMatrix::identity(d.dim_m));
  r.g_form = max_abs_diff(g_operator(d, c), form);
  return r;
}

ExhaustiveSecurity exhaustive_security(const ProtocolConfig& cfg, const Dilation& per_round,
                                       const ComplexMatrix& joint_sigma, const ExtractorProvider& extractors) {
  cfg.validate();
  require(cfg.n >= 1 && cfg.n <= 6, ErrorCode::SizeLimit, "exhaustive enumeration supports n <= 6");
  per_round.validate();
  const std::size_t n = cfg.n, dm = per_round.dim_m;
  MultiRoundState whole;
  whole.rounds = n;
  whole.dim_m = dm;
  whole.sigma = joint_sigma;
  whole.validate();
  require(whole.total_dim() <= 4096, ErrorCode::SizeLimit, "joint memory too large");

  std::array<std::array<ComplexMatrix, 2>, 2> q;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) q[a][x] = q_operator(per_round, a, x);
  const ComplexMatrix id = ComplexMatrix::identity(dm);
  const std::vector<std::size_t> dims(n, dm);

  std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>, std::uint64_t>
      lengths;
  ExhaustiveSecurity out;
  out.epsilon = cfg.epsilon;
  for (std::uint32_t tmask = 0; tmask < (1u << n); ++tmask) {
    const unsigned n_r = static_cast<unsigned>(std::popcount(tmask));
    const unsigned n_e = static_cast<unsigned>(n) - n_r;
    std::vector<std::size_t> raw_idx, est_idx;
    for (std::size_t i = 0; i < n; ++i) ((tmask >> i) & 1 ? raw_idx : est_idx).push_back(i);
    const double pt = std::pow(cfg.p_e, n_e) * std::pow(cfg.p_r(), n_r);
    for (std::uint32_t zc = 0; zc < (1u << (2 * n_e)); ++zc) {
      ++out.transcripts;
      EstimationCounts counts;
      std::vector<ComplexMatrix> ops(n, id);
      for (unsigned j = 0; j < n_e; ++j) {
        const int a = (zc >> (2 * j)) & 1, x = (zc >> (2 * j + 1)) & 1;
        ++counts.c[a][x];
        ops[est_idx[j]] = q[a][x];
      }
      const auto key = std::make_tuple(counts.c[0][0], counts.c[0][1], counts.c[1][0], counts.c[1][1],
                                       std::uint64_t{n_r});
      auto it = lengths.find(key);
      if (it == lengths.end())
        it = lengths.emplace(key, solve_length(cfg.extractor, counts, n_r, cfg).m_out).first;
      const std::uint64_t m = it->second;
      if (m == 0) continue;
      const ComplexMatrix weighted = joint_sigma * product_operator(ops);
      ComplexMatrix tau = partial_trace(weighted, dims, raw_idx).hermitian_part();
      const double tr = tau.trace().real();
      const double p = pt * tr;
      if (!(tr > 1e-300)) continue;
      ++out.with_output;
      out.output_probability += p;
      MultiRoundState cond;
      cond.rounds = n_r;
      cond.dim_m = dm;
      cond.sigma = (1.0 / tr) * tau;
      const Dilation rounds[1] = {per_round};
      CqState cq;
      if (cfg.extractor == ExtractorType::SingleBit) {
        cq = exact_xor_state(rounds, cond);
      } else {
        const ExtractorFunction* g = extractors ? extractors(n_r, static_cast<unsigned>(m)) : nullptr;
        require(g != nullptr, ErrorCode::Precondition, "no extractor available for this output length");
        cq = exact_cq_state(rounds, cond, *g);
      }
      out.average_distance += p * trace_distance_to_ideal(cq);
    }
  }
  return out;
}

}  // namespace sdirng
