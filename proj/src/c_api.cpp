// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include "sdirng/sdirng.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "sdirng/error.hpp"
#include "sdirng/extractor.hpp"
#include "sdirng/guessing.hpp"
#include "sdirng/protocol.hpp"
#include "sdirng/rates.hpp"
#include "sdirng/serialize.hpp"
#include "sdirng/validation.hpp"

struct sdirng_extractor {
  sdirng::ExtractorFunction g;
};

struct sdirng_table {
  sdirng::SweepTable t;
};

namespace {

using namespace sdirng;

thread_local std::string g_last_error;

template <class F>
int guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return SDIRNG_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const Json::exception& e) {
    g_last_error = e.what();
    return SDIRNG_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SDIRNG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SDIRNG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SDIRNG_ERR_INTERNAL;
  }
}

// reports SDIRNG_ERR_NULL instead of dereferencing
#define SDIRNG_NONNULL(p)                                 \
  do {                                                    \
    if ((p) == nullptr) {                                 \
      g_last_error = "null argument: " #p;                \
      return SDIRNG_ERR_NULL;                             \
    }                                                     \
  } while (0)

Behavior to_core(const sdirng_behavior& b) { return Behavior::from_table(b.p00, b.p10, b.p01, b.p11); }

sdirng_behavior to_c(const Behavior& b) { return {b.p[0][0], b.p[1][0], b.p[0][1], b.p[1][1]}; }

void fill(const DualCertificate& c, sdirng_certificate& out) {
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) out.nu[a][x] = c.nu[a][x];
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        out.h_re[l][i][j] = c.h[l](i, j).real();
        out.h_im[l][i][j] = c.h[l](i, j).imag();
      }
  out.delta = c.delta;
  out.margin = feasibility_margin(c);
}

DualCertificate to_core(const sdirng_certificate& c) {
  DualCertificate out;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) out.nu[a][x] = c.nu[a][x];
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.h[l](i, j) = cplx(c.h_re[l][i][j], c.h_im[l][i][j]);
  out.delta = OverlapBound(c.delta).value();
  return out;
}

void copy_out(const std::string& s, char* buf, std::size_t cap, std::size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf == nullptr) return;
  if (cap < s.size() + 1) fail(ErrorCode::SizeLimit, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

ProtocolConfig to_core(const sdirng_protocol_config& c) {
  ProtocolConfig out;
  out.n = c.n;
  out.p_e = c.p_e;
  out.epsilon = c.epsilon;
  require(c.extractor == SDIRNG_SINGLE_BIT || c.extractor == SDIRNG_MULTI_BIT, ErrorCode::InvalidArgument,
          "extractor must be 0 (single) or 1 (multi)");
  out.extractor = static_cast<ExtractorType>(c.extractor);
  out.delta = c.delta;
  out.seed = c.seed;
  out.cap_constructible = c.cap_constructible != 0;
  out.validate();
  return out;
}

sdirng_protocol_config to_c(const ProtocolConfig& c) {
  return {c.n, c.p_e, c.epsilon, static_cast<int>(c.extractor), c.delta, c.seed, c.cap_constructible ? 1 : 0};
}

void fill(const ProtocolTranscript& t, const LengthSolution& l, sdirng_protocol_result& out) {
  out = {};
  out.n_e = t.n_e();
  out.n_r = t.n_r();
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) {
      out.counts[a][x] = t.counts.c[a][x];
      out.alpha[a][x] = l.alpha[a][x];
    }
  out.objective = l.objective;
  out.m_out = l.m_out;
  out.feasible = l.feasible ? 1 : 0;
  out.beta = l.beta;
  out.residual = l.residual;
  fill(l.certificate, out.certificate);
}

}  // namespace

extern "C" {

const char* sdirng_version(void) { return "0.1.0"; }

const char* sdirng_last_error(void) { return g_last_error.c_str(); }

const char* sdirng_status_string(int status) {
  switch (status) {
    case SDIRNG_OK: return "ok";
    case SDIRNG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SDIRNG_ERR_DIMENSION: return "dimension mismatch";
    case SDIRNG_ERR_NOT_HERMITIAN: return "not hermitian";
    case SDIRNG_ERR_INFEASIBLE: return "infeasible";
    case SDIRNG_ERR_EXHAUSTED: return "attempts exhausted";
    case SDIRNG_ERR_IO: return "i/o error";
    case SDIRNG_ERR_SIZE_LIMIT: return "size limit";
    case SDIRNG_ERR_PRECONDITION: return "precondition violated";
    case SDIRNG_ERR_INTERNAL: return "internal error";
    case SDIRNG_ERR_NULL: return "null argument";
    case SDIRNG_ERR_BUFFER: return "buffer too small";
    default: return "unknown status";
  }
}

int sdirng_family_behavior(double delta, sdirng_behavior* out) {
  SDIRNG_NONNULL(out);
  return guarded([&] { *out = to_c(family_behavior(OverlapBound(delta))); });
}

int sdirng_apply_uniform_noise(const sdirng_behavior* b, double gamma, sdirng_behavior* out) {
  SDIRNG_NONNULL(b);
  SDIRNG_NONNULL(out);
  return guarded([&] { *out = to_c(apply_uniform_noise(to_core(*b), NoiseRate(gamma))); });
}

int sdirng_behavior_to_json(const sdirng_behavior* b, char* buf, size_t cap, size_t* needed) {
  SDIRNG_NONNULL(b);
  int rc = guarded([&] { copy_out(to_json(to_core(*b)).dump(), buf, cap, needed); });
  return rc == SDIRNG_ERR_SIZE_LIMIT ? SDIRNG_ERR_BUFFER : rc;
}

int sdirng_behavior_from_json(const char* text, sdirng_behavior* out) {
  SDIRNG_NONNULL(text);
  SDIRNG_NONNULL(out);
  return guarded([&] { *out = to_c(behavior_from_json(Json::parse(text))); });
}

int sdirng_solve_dual(const sdirng_behavior* b, double delta, sdirng_certificate* out) {
  SDIRNG_NONNULL(b);
  SDIRNG_NONNULL(out);
  return guarded([&] {
    const auto sol = solve_dual(to_core(*b), OverlapBound(delta));
    fill(sol.cert, *out);
    out->objective = sol.objective;
    out->margin = sol.margin;
  });
}

int sdirng_solve_primal(const sdirng_behavior* b, double delta, uint64_t seed, double* objective, double* residual) {
  SDIRNG_NONNULL(b);
  SDIRNG_NONNULL(objective);
  return guarded([&] {
    PrimalOptions opts;
    opts.seed = seed;
    const auto sol = solve_primal_oracle(to_core(*b), OverlapBound(delta), opts);
    *objective = sol.objective;
    if (residual) *residual = sol.residual;
  });
}

int sdirng_verify_certificate(const sdirng_certificate* c, const sdirng_behavior* b, double tol, int* feasible,
                              double* objective) {
  SDIRNG_NONNULL(c);
  SDIRNG_NONNULL(feasible);
  return guarded([&] {
    const auto cert = to_core(*c);
    *feasible = verify_dual_feasible(cert, tol) ? 1 : 0;
    if (b && objective) *objective = dual_objective(cert, to_core(*b));
  });
}

int sdirng_certificate_to_json(const sdirng_certificate* c, char* buf, size_t cap, size_t* needed) {
  SDIRNG_NONNULL(c);
  int rc = guarded([&] {
    DualSolution s;
    s.cert = to_core(*c);
    s.objective = c->objective;
    s.margin = c->margin;
    copy_out(to_json(s).dump(), buf, cap, needed);
  });
  return rc == SDIRNG_ERR_SIZE_LIMIT ? SDIRNG_ERR_BUFFER : rc;
}

int sdirng_certificate_from_json(const char* text, sdirng_certificate* out) {
  SDIRNG_NONNULL(text);
  SDIRNG_NONNULL(out);
  return guarded([&] {
    const Json j = Json::parse(text);
    *out = {};
    fill(certificate_from_json(j), *out);
    out->objective = j.value("objective", 0.0);
  });
}

int sdirng_extractor_build(unsigned n_r, unsigned m, uint64_t max_attempts, uint64_t seed, unsigned workers,
                           sdirng_extractor** out, uint64_t* attempts) {
  SDIRNG_NONNULL(out);
  return guarded([&] {
    auto c = construct_random_extractor(n_r, m, max_attempts, seed, workers == 0 ? 1 : workers);
    if (attempts) *attempts = c.attempts;
    *out = new sdirng_extractor{std::move(c.g)};
  });
}

int sdirng_extractor_from_table(unsigned n_r, unsigned m, const uint32_t* table, size_t len, sdirng_extractor** out) {
  SDIRNG_NONNULL(table);
  SDIRNG_NONNULL(out);
  return guarded([&] {
    *out = new sdirng_extractor{ExtractorFunction(n_r, m, std::vector<std::uint32_t>(table, table + len))};
  });
}

int sdirng_extractor_parity(unsigned n_r, sdirng_extractor** out) {
  SDIRNG_NONNULL(out);
  return guarded([&] { *out = new sdirng_extractor{ExtractorFunction::parity(n_r)}; });
}

int sdirng_extractor_constant(unsigned n_r, unsigned m, uint32_t value, sdirng_extractor** out) {
  SDIRNG_NONNULL(out);
  return guarded([&] { *out = new sdirng_extractor{ExtractorFunction::constant(n_r, m, value)}; });
}

int sdirng_extractor_load(const char* path, sdirng_extractor** out) {
  SDIRNG_NONNULL(path);
  SDIRNG_NONNULL(out);
  return guarded([&] { *out = new sdirng_extractor{load_extractor(path)}; });
}

int sdirng_extractor_save(const sdirng_extractor* g, const char* path) {
  SDIRNG_NONNULL(g);
  SDIRNG_NONNULL(path);
  return guarded([&] { save_extractor(g->g, path); });
}

int sdirng_extractor_check(sdirng_extractor* g, unsigned workers, sdirng_property_check* out) {
  SDIRNG_NONNULL(g);
  SDIRNG_NONNULL(out);
  return guarded([&] {
    const auto pc = check_property(g->g, workers == 0 ? 1 : workers);
    *out = {pc.holds ? 1 : 0, pc.k, pc.r, pc.value, pc.bound};
  });
}

int sdirng_extractor_info(const sdirng_extractor* g, unsigned* n_r, unsigned* m, int* verified, uint64_t* seed) {
  SDIRNG_NONNULL(g);
  if (n_r) *n_r = g->g.n_r();
  if (m) *m = g->g.m();
  if (verified) *verified = g->g.verified() ? 1 : 0;
  if (seed) *seed = g->g.seed();
  return SDIRNG_OK;
}

int sdirng_extractor_apply(const sdirng_extractor* g, const uint8_t* bits, size_t len, uint32_t* out) {
  SDIRNG_NONNULL(g);
  SDIRNG_NONNULL(out);
  if (len > 0) SDIRNG_NONNULL(bits);
  return guarded([&] {
    require(len == g->g.n_r(), ErrorCode::DimensionMismatch, "input length differs from n_r");
    *out = g->g.apply(std::span<const std::uint8_t>(bits, len));
  });
}

void sdirng_extractor_free(sdirng_extractor* g) { delete g; }

void sdirng_protocol_config_default(sdirng_protocol_config* cfg) {
  if (cfg) *cfg = to_c(ProtocolConfig{});
}

int sdirng_run_protocol(const sdirng_protocol_config* cfg, const sdirng_behavior* b, const sdirng_extractor* g,
                        const char* transcript_path, sdirng_protocol_result* out) {
  SDIRNG_NONNULL(cfg);
  SDIRNG_NONNULL(b);
  SDIRNG_NONNULL(out);
  return guarded([&] {
    const ProtocolConfig c = to_core(*cfg);
    const Behavior beh = to_core(*b);
    ProtocolRun run;
    if (g == nullptr && c.extractor == ExtractorType::MultiBit) {
      run.transcript = run_rounds(c, beh);
      run.length = solve_length(c.extractor, run.transcript.counts, run.transcript.n_r(), c);
    } else {
      run = run_protocol(c, beh, g ? &g->g : nullptr);
    }
    if (transcript_path) save_transcript(c, run.transcript, transcript_path);
    fill(run.transcript, run.length, *out);
    out->has_output = run.output.has_value() ? 1 : 0;
    out->output = run.output.value_or(0);
  });
}

int sdirng_transcript_load(const char* path, sdirng_protocol_config* cfg, sdirng_protocol_result* out) {
  SDIRNG_NONNULL(path);
  SDIRNG_NONNULL(out);
  return guarded([&] {
    const auto f = load_transcript(path);
    const auto& t = f.transcript;
    const auto l = solve_length(f.config.extractor, t.counts, t.n_r(), f.config);
    fill(t, l, *out);
    if (f.config.extractor == ExtractorType::SingleBit && l.m_out == 1) {
      out->has_output = 1;
      out->output = xor_extract(t.raw);
    }
    if (cfg) *cfg = to_c(f.config);
  });
}

int sdirng_finite_rate(const sdirng_protocol_config* cfg, const sdirng_behavior* b, uint64_t samples,
                       unsigned workers, sdirng_rate_estimate* out) {
  SDIRNG_NONNULL(cfg);
  SDIRNG_NONNULL(b);
  SDIRNG_NONNULL(out);
  return guarded([&] {
    const auto r = finite_rate(to_core(*cfg), to_core(*b), samples, workers == 0 ? 1 : workers);
    *out = {r.n, r.mean_rate, r.std_error, r.samples};
  });
}

int sdirng_asymptotic_rate(int extractor, const sdirng_behavior* b, double delta, double p_e,
                           sdirng_asymptotic* out) {
  SDIRNG_NONNULL(b);
  SDIRNG_NONNULL(out);
  return guarded([&] {
    require(extractor == SDIRNG_SINGLE_BIT || extractor == SDIRNG_MULTI_BIT, ErrorCode::InvalidArgument,
            "extractor must be 0 (single) or 1 (multi)");
    std::optional<double> pe;
    if (!std::isnan(p_e)) pe = p_e;
    const auto s = asymptotic_rate(static_cast<ExtractorType>(extractor), to_core(*b), OverlapBound(delta), pe);
    *out = {};
    out->p_e = s.p_e;
    out->rate = s.rate;
    for (int a = 0; a < 2; ++a)
      for (int x = 0; x < 2; ++x) out->alpha[a][x] = s.solution.alpha[a][x];
    out->beta = s.solution.beta;
    fill(s.solution.certificate, out->certificate);
  });
}

int sdirng_xor_min_pe(const sdirng_behavior* b, double delta, const double* grid, size_t len, double* out,
                      int* found) {
  SDIRNG_NONNULL(b);
  SDIRNG_NONNULL(out);
  SDIRNG_NONNULL(found);
  return guarded([&] {
    std::vector<double> g = grid ? std::vector<double>(grid, grid + len) : default_pe_grid();
    const auto r = xor_asymptotic_min_pe(to_core(*b), OverlapBound(delta), g);
    *found = r ? 1 : 0;
    *out = r.value_or(std::nan(""));
  });
}

void sdirng_sweep_spec_default(sdirng_sweep_spec* spec) {
  if (!spec) return;
  const SweepSpec d;
  *spec = {};
  spec->kind = SDIRNG_SWEEP_RATE_BY_DELTA;
  spec->p_e = std::nan("");
  spec->tune_finite_pe = d.tune_finite_pe ? 1 : 0;
  spec->epsilon = d.epsilon;
  spec->extractor = static_cast<int>(d.extractor);
  spec->samples = d.samples;
  spec->seed = d.seed;
  spec->workers = d.workers;
  spec->include_asymptotic = d.include_asymptotic ? 1 : 0;
}

int sdirng_sweep(const sdirng_sweep_spec* spec, sdirng_table** out) {
  SDIRNG_NONNULL(spec);
  SDIRNG_NONNULL(out);
  return guarded([&] {
    SweepSpec s;
    require(spec->kind >= 0 && spec->kind <= 2, ErrorCode::InvalidArgument, "unknown sweep kind");
    s.kind = static_cast<SweepKind>(spec->kind);
    auto take = [](auto* p, std::size_t n, auto& dst) {
      if (p != nullptr && n > 0) dst.assign(p, p + n);
    };
    take(spec->deltas, spec->n_deltas, s.deltas);
    take(spec->gammas, spec->n_gammas, s.gammas);
    take(spec->ns, spec->n_ns, s.ns);
    if (!std::isnan(spec->p_e)) s.p_e = spec->p_e;
    s.tune_finite_pe = spec->tune_finite_pe != 0;
    s.epsilon = spec->epsilon;
    require(spec->extractor == SDIRNG_SINGLE_BIT || spec->extractor == SDIRNG_MULTI_BIT,
            ErrorCode::InvalidArgument, "extractor must be 0 (single) or 1 (multi)");
    s.extractor = static_cast<ExtractorType>(spec->extractor);
    s.samples = spec->samples;
    s.seed = spec->seed;
    s.workers = spec->workers == 0 ? 1 : spec->workers;
    s.include_asymptotic = spec->include_asymptotic != 0;
    *out = new sdirng_table{sweep(s)};
  });
}

size_t sdirng_table_rows(const sdirng_table* t) { return t ? t->t.rows.size() : 0; }

int sdirng_table_row(const sdirng_table* t, size_t i, sdirng_row* out) {
  SDIRNG_NONNULL(t);
  SDIRNG_NONNULL(out);
  if (i >= t->t.rows.size()) {
    g_last_error = "row index out of range";
    return SDIRNG_ERR_INVALID_ARGUMENT;
  }
  const auto& r = t->t.rows[i];
  *out = {r.kind.c_str(), r.delta, r.gamma, r.n, r.p_e, r.epsilon, r.samples, r.mean_rate, r.std_error,
          r.certificate_id.c_str(), r.seed, r.primal, r.dual, r.primal_residual, r.certificate_json.c_str()};
  return SDIRNG_OK;
}

void sdirng_table_free(sdirng_table* t) { delete t; }

int sdirng_validate(const char* suite, uint64_t instances, uint64_t seed, sdirng_validation_summary* out,
                    char* offending, size_t cap, size_t* needed) {
  SDIRNG_NONNULL(suite);
  SDIRNG_NONNULL(out);
  int rc = guarded([&] {
    const auto r = run_validation(suite, instances, seed);
    *out = {r.instances, r.worst, r.threshold, r.upper_limit ? 1 : 0, r.passed ? 1 : 0};
    copy_out(r.offending, offending, cap, needed);
  });
  return rc == SDIRNG_ERR_SIZE_LIMIT ? SDIRNG_ERR_BUFFER : rc;
}

}  // extern "C"
