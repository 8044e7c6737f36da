// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/rates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "sdirng/error.hpp"
#include "sdirng/guessing.hpp"
#include "sdirng/serialize.hpp"

namespace sdirng {

namespace {

template <typename F>
void parallel_for(std::size_t count, unsigned workers, F&& f) {
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// coarse logistic grid in p_e, then golden section around the best point
template <typename F>
std::pair<double, double> maximize_over_pe(F&& value, std::vector<std::pair<double, double>>* scan) {
  constexpr int kGrid = 64;
  const double lo = -7.0, hi = 7.0;
  std::vector<double> vs(kGrid), fs(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    vs[i] = lo + (hi - lo) * i / (kGrid - 1);
    fs[i] = value(logistic(vs[i]));
    if (scan) scan->emplace_back(logistic(vs[i]), fs[i]);
  }
  const int best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  double a = vs[std::max(0, best - 1)], b = vs[std::min(kGrid - 1, best + 1)];
  double best_v = vs[best], best_f = fs[best];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = value(logistic(c)), fd = value(logistic(d));
  for (int it = 0; it < 40; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = value(logistic(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = value(logistic(d));
    }
  }
  for (auto [v, f] : {std::pair{c, fc}, std::pair{d, fd}}) {
    if (scan) scan->emplace_back(logistic(v), f);
    if (f > best_f) {
      best_f = f;
      best_v = v;
    }
  }
  return {logistic(best_v), best_f};
}

AsymptoticSolution asymptotic_at(ExtractorType t, const Behavior& b, OverlapBound delta, double p_e) {
  Table2 w{};
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) w[a][x] = 0.5 * p_e * b.p[a][x];
  AsymptoticSolution out;
  out.extractor = t;
  out.p_e = p_e;
  out.solution = maximize_weighted(t, w, 1.0 - p_e, p_e, delta);
  out.rate = out.solution.value;
  return out;
}

}  // namespace

RateEstimate finite_rate(const ProtocolConfig& cfg, const Behavior& b, std::size_t samples, unsigned workers) {
  cfg.validate();
  b.validate(1e-9);
  require(samples >= 1, ErrorCode::InvalidArgument, "need at least one sample");
  RateEstimate est;
  est.n = cfg.n;
  est.samples = samples;
  est.config = cfg;
  est.records.resize(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    ProtocolConfig c = cfg;
    c.seed = derive_seed(cfg.seed, i);
    const CountsOnly co = simulate_counts(c, b);
    SampleRecord& r = est.records[i];
    r.seed = c.seed;
    r.n_r = co.n_r;
    r.counts = co.counts;
    r.length = solve_length(c.extractor, co.counts, co.n_r, c);
  });
  double sum = 0.0, sq = 0.0;
  for (const auto& r : est.records) {
    const double rate = static_cast<double>(r.length.m_out) / static_cast<double>(cfg.n);
    sum += rate;
    sq += rate * rate;
  }
  const double s = static_cast<double>(samples);
  est.mean_rate = sum / s;
  if (samples > 1) {
    const double var = std::max(0.0, (sq - s * est.mean_rate * est.mean_rate) / (s - 1.0));
    est.std_error = std::sqrt(var / s);
  }
  return est;
}

AsymptoticSolution asymptotic_rate(ExtractorType t, const Behavior& b, OverlapBound delta, std::optional<double> p_e) {
  b.validate(1e-9);
  if (p_e) {
    require(*p_e > 0.0 && *p_e < 1.0, ErrorCode::InvalidArgument, "estimation probability must lie in (0,1)");
    auto out = asymptotic_at(t, b, delta, *p_e);
    out.scan.emplace_back(*p_e, out.rate);
    return out;
  }
  std::vector<std::pair<double, double>> scan;
  const auto [pe, rate] = maximize_over_pe([&](double pe) { return asymptotic_at(t, b, delta, pe).rate; }, &scan);
  (void)rate;
  auto out = asymptotic_at(t, b, delta, pe);
  out.scan = std::move(scan);
  return out;
}

AsymptoticSolution asymptotic_rate_mul(OverlapBound delta, std::optional<double> p_e) {
  return asymptotic_rate(ExtractorType::MultiBit, family_behavior(delta), delta, p_e);
}

std::optional<double> xor_asymptotic_min_pe(const Behavior& b, OverlapBound delta, std::span<const double> pe_grid) {
  require(!pe_grid.empty(), ErrorCode::InvalidArgument, "p_e grid is empty");
  for (std::size_t i = 1; i < pe_grid.size(); ++i)
    require(pe_grid[i] > pe_grid[i - 1], ErrorCode::InvalidArgument, "p_e grid must be ascending");
  for (double pe : pe_grid)
    if (asymptotic_rate(ExtractorType::SingleBit, b, delta, pe).rate > kXorPositivityTolerance) return pe;
  return std::nullopt;
}

std::optional<double> xor_asymptotic_min_pe(OverlapBound delta, std::span<const double> pe_grid) {
  return xor_asymptotic_min_pe(family_behavior(delta), delta, pe_grid);
}

std::vector<double> default_pe_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 40; ++i) g.push_back(0.01 + 0.98 * i / 40.0);
  return g;
}

double tuned_pe(const Behavior& b, const ProtocolConfig& cfg) {
  cfg.validate();
  const double n = static_cast<double>(cfg.n);
  auto value = [&](double pe) {
    Table2 w{};
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < 2; ++x) w[a][x] = 0.5 * n * pe * b.p[a][x];
    const double nr = n * (1.0 - pe);
    if (nr < 1.0) return -1e300;
    const auto ws = maximize_weighted(cfg.extractor, w, nr, pe, OverlapBound(cfg.delta));
    double f = ws.value - 2.0 * std::log2(1.0 / cfg.epsilon);
    if (cfg.extractor == ExtractorType::MultiBit) f -= 4.0 * std::log2(nr);
    return f;
  };
  return maximize_over_pe(value, nullptr).first;
}

const char* to_string(SweepKind k) {
  switch (k) {
    case SweepKind::PguessVsDelta: return "pguess-vs-delta";
    case SweepKind::RateVsNByDelta: return "rate-vs-n-by-delta";
    case SweepKind::RateVsNByGamma: return "rate-vs-n-by-gamma";
  }
  return "?";
}

SweepKind sweep_kind_from_string(const std::string& s) {
  for (auto k : {SweepKind::PguessVsDelta, SweepKind::RateVsNByDelta, SweepKind::RateVsNByGamma})
    if (s == to_string(k)) return k;
  fail(ErrorCode::InvalidArgument, "unknown sweep kind '" + s + "'");
}

std::string certificate_id(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SweepTable sweep(const SweepSpec& spec) {
  require(!spec.deltas.empty(), ErrorCode::InvalidArgument, "delta grid is empty");
  for (double d : spec.deltas) OverlapBound check(d);
  for (double g : spec.gammas) NoiseRate check(g);
  SweepTable table;
  table.kind = spec.kind;
  if (spec.kind == SweepKind::PguessVsDelta) {
    table.rows.resize(spec.deltas.size());
    parallel_for(spec.deltas.size(), spec.workers, [&](std::size_t i) {
      const double d = spec.deltas[i];
      const double gamma = spec.gammas.empty() ? 0.0 : spec.gammas.front();
      const Behavior b = apply_uniform_noise(family_behavior(OverlapBound(d)), NoiseRate(gamma));
      const auto dual = solve_dual(b, OverlapBound(d));
      PrimalOptions po;
      po.seed = derive_seed(spec.seed, i);
      const auto primal = solve_primal_oracle(b, OverlapBound(d), po);
      SweepRow& r = table.rows[i];
      r.kind = "pguess";
      r.delta = d;
      r.gamma = gamma;
      r.seed = po.seed;
      r.primal = primal.objective;
      r.primal_residual = primal.residual;
      r.dual = dual.objective;
      Json j = to_json(dual);
      j["behavior"] = to_json(b);
      r.certificate_json = j.dump();
      r.certificate_id = certificate_id(r.certificate_json);
    });
    return table;
  }
  require(!spec.ns.empty(), ErrorCode::InvalidArgument, "n grid is empty");
  require(spec.samples >= 1, ErrorCode::InvalidArgument, "need at least one sample");
  const std::vector<double> gammas = spec.gammas.empty() ? std::vector<double>{0.0} : spec.gammas;
  std::uint64_t row_index = 0;
  for (double d : spec.deltas)
    for (double gamma : gammas) {
      const Behavior b = apply_uniform_noise(family_behavior(OverlapBound(d)), NoiseRate(gamma));
      std::optional<AsymptoticSolution> asym;
      if (!spec.p_e || spec.include_asymptotic)
        asym = asymptotic_rate(spec.extractor, b, OverlapBound(d), spec.p_e);
      if (asym && spec.include_asymptotic && !spec.p_e) {
        SweepRow r;
        r.kind = "asymptotic";
        r.delta = d;
        r.gamma = gamma;
        r.p_e = asym->p_e;
        r.epsilon = spec.epsilon;
        r.mean_rate = asym->rate;
        r.seed = spec.seed;
        Json j = to_json(*asym);
        j["behavior"] = to_json(b);
        r.certificate_json = j.dump();
        r.certificate_id = certificate_id(r.certificate_json);
        table.rows.push_back(std::move(r));
      }
      for (std::uint64_t n : spec.ns) {
        ProtocolConfig cfg;
        cfg.n = n;
        cfg.delta = d;
        cfg.epsilon = spec.epsilon;
        cfg.extractor = spec.extractor;
        cfg.seed = derive_seed(spec.seed, row_index++);
        cfg.p_e = 0.5;
        if (spec.p_e)
          cfg.p_e = *spec.p_e;
        else if (spec.tune_finite_pe)
          cfg.p_e = tuned_pe(b, cfg);
        else
          cfg.p_e = asym->p_e;
        const RateEstimate est = finite_rate(cfg, b, spec.samples, spec.workers);
        SweepRow r;
        r.kind = "finite";
        r.delta = d;
        r.gamma = gamma;
        r.n = n;
        r.p_e = cfg.p_e;
        r.epsilon = cfg.epsilon;
        r.samples = est.samples;
        r.mean_rate = est.mean_rate;
        r.std_error = est.std_error;
        r.seed = cfg.seed;
        Json j;
        j["config"] = to_json(cfg);
        j["behavior"] = to_json(b);
        Json recs = Json::array();
        for (const auto& rec : est.records)
          recs.push_back(Json{{"seed", rec.seed}, {"n_r", rec.n_r}, {"counts", to_json(rec.counts)},
                              {"length", to_json(rec.length)}});
        j["samples"] = recs;
        r.certificate_json = j.dump();
        r.certificate_id = certificate_id(r.certificate_json);
        table.rows.push_back(std::move(r));
      }
    }
  return table;
}

}  // namespace sdirng
