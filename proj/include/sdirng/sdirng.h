/* Copyright 2026 The sdirng Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the sdirng library. Every function returns an
 * sdirng_status; on failure sdirng_last_error() describes the problem
 * (thread-local, valid until the next call on the same thread).
 */
#ifndef SDIRNG_SDIRNG_H
#define SDIRNG_SDIRNG_H

#include <stddef.h>
#include <stdint.h>

#if defined(SDIRNG_BUILDING)
#define SDIRNG_API __attribute__((visibility("default")))
#else
#define SDIRNG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SDIRNG_OK = 0,
  SDIRNG_ERR_INVALID_ARGUMENT = 1,
  SDIRNG_ERR_DIMENSION = 2,
  SDIRNG_ERR_NOT_HERMITIAN = 3,
  SDIRNG_ERR_INFEASIBLE = 4,
  SDIRNG_ERR_EXHAUSTED = 5,
  SDIRNG_ERR_IO = 6,
  SDIRNG_ERR_SIZE_LIMIT = 7,
  SDIRNG_ERR_PRECONDITION = 8,
  SDIRNG_ERR_INTERNAL = 9,
  SDIRNG_ERR_NULL = 10,
  SDIRNG_ERR_BUFFER = 11
} sdirng_status;

enum { SDIRNG_SINGLE_BIT = 0, SDIRNG_MULTI_BIT = 1 };
enum { SDIRNG_SWEEP_PGUESS = 0, SDIRNG_SWEEP_RATE_BY_DELTA = 1, SDIRNG_SWEEP_RATE_BY_GAMMA = 2 };

SDIRNG_API const char* sdirng_version(void);
SDIRNG_API const char* sdirng_last_error(void);
SDIRNG_API const char* sdirng_status_string(int status);

/* p_ax = p(a|x) */
typedef struct {
  double p00, p10, p01, p11;
} sdirng_behavior;

/* nu[a][x]; h_re/h_im[lambda][i][j] */
typedef struct {
  double nu[2][2];
  double h_re[2][2][2];
  double h_im[2][2][2];
  double delta;
  double objective;
  double margin;
} sdirng_certificate;

SDIRNG_API int sdirng_family_behavior(double delta, sdirng_behavior* out);
SDIRNG_API int sdirng_apply_uniform_noise(const sdirng_behavior* b, double gamma, sdirng_behavior* out);
/* JSON writers copy into buf when cap suffices; needed receives strlen + 1 */
SDIRNG_API int sdirng_behavior_to_json(const sdirng_behavior* b, char* buf, size_t cap, size_t* needed);
SDIRNG_API int sdirng_behavior_from_json(const char* text, sdirng_behavior* out);

SDIRNG_API int sdirng_solve_dual(const sdirng_behavior* b, double delta, sdirng_certificate* out);
SDIRNG_API int sdirng_solve_primal(const sdirng_behavior* b, double delta, uint64_t seed, double* objective,
                                   double* residual);
/* objective receives the dual objective against b when both are not NULL */
SDIRNG_API int sdirng_verify_certificate(const sdirng_certificate* c, const sdirng_behavior* b, double tol,
                                         int* feasible, double* objective);
SDIRNG_API int sdirng_certificate_to_json(const sdirng_certificate* c, char* buf, size_t cap, size_t* needed);
SDIRNG_API int sdirng_certificate_from_json(const char* text, sdirng_certificate* out);

typedef struct sdirng_extractor sdirng_extractor;

typedef struct {
  int holds;
  uint32_t k, r;
  double value, bound;
} sdirng_property_check;

SDIRNG_API int sdirng_extractor_build(unsigned n_r, unsigned m, uint64_t max_attempts, uint64_t seed,
                                      unsigned workers, sdirng_extractor** out, uint64_t* attempts);
SDIRNG_API int sdirng_extractor_from_table(unsigned n_r, unsigned m, const uint32_t* table, size_t len,
                                           sdirng_extractor** out);
SDIRNG_API int sdirng_extractor_parity(unsigned n_r, sdirng_extractor** out);
SDIRNG_API int sdirng_extractor_constant(unsigned n_r, unsigned m, uint32_t value, sdirng_extractor** out);
SDIRNG_API int sdirng_extractor_load(const char* path, sdirng_extractor** out);
SDIRNG_API int sdirng_extractor_save(const sdirng_extractor* g, const char* path);
SDIRNG_API int sdirng_extractor_check(sdirng_extractor* g, unsigned workers, sdirng_property_check* out);
SDIRNG_API int sdirng_extractor_info(const sdirng_extractor* g, unsigned* n_r, unsigned* m, int* verified,
                                     uint64_t* seed);
SDIRNG_API int sdirng_extractor_apply(const sdirng_extractor* g, const uint8_t* bits, size_t len, uint32_t* out);
SDIRNG_API void sdirng_extractor_free(sdirng_extractor* g);

typedef struct {
  uint64_t n;
  double p_e;
  double epsilon;
  int extractor;
  double delta;
  uint64_t seed;
  int cap_constructible;
} sdirng_protocol_config;

SDIRNG_API void sdirng_protocol_config_default(sdirng_protocol_config* cfg);

typedef struct {
  uint64_t n_e, n_r;
  uint64_t counts[2][2]; /* counts[a][x] */
  double objective;
  uint64_t m_out;
  int feasible;
  int has_output;
  uint32_t output;
  double alpha[2][2];
  double beta;
  double residual;
  sdirng_certificate certificate;
} sdirng_protocol_result;

/* with g NULL a multi-bit run reports its length only; transcript_path may be NULL */
SDIRNG_API int sdirng_run_protocol(const sdirng_protocol_config* cfg, const sdirng_behavior* b,
                                   const sdirng_extractor* g, const char* transcript_path,
                                   sdirng_protocol_result* out);
/* reload a transcript file and recompute its output length */
SDIRNG_API int sdirng_transcript_load(const char* path, sdirng_protocol_config* cfg, sdirng_protocol_result* out);

typedef struct {
  uint64_t n;
  double mean_rate, std_error;
  uint64_t samples;
} sdirng_rate_estimate;

SDIRNG_API int sdirng_finite_rate(const sdirng_protocol_config* cfg, const sdirng_behavior* b, uint64_t samples,
                                  unsigned workers, sdirng_rate_estimate* out);

typedef struct {
  double p_e;
  double rate;
  double alpha[2][2];
  double beta;
  sdirng_certificate certificate;
} sdirng_asymptotic;

/* p_e NaN selects the optimizing scan */
SDIRNG_API int sdirng_asymptotic_rate(int extractor, const sdirng_behavior* b, double delta, double p_e,
                                      sdirng_asymptotic* out);
SDIRNG_API int sdirng_xor_min_pe(const sdirng_behavior* b, double delta, const double* grid, size_t len,
                                 double* out, int* found);

typedef struct {
  int kind;
  const double* deltas;
  size_t n_deltas;
  const double* gammas;
  size_t n_gammas;
  const uint64_t* ns;
  size_t n_ns;
  double p_e; /* NaN: chosen per point */
  int tune_finite_pe;
  double epsilon;
  int extractor;
  uint64_t samples;
  uint64_t seed;
  unsigned workers;
  int include_asymptotic;
} sdirng_sweep_spec;

typedef struct sdirng_table sdirng_table;

/* strings stay valid while the table lives */
typedef struct {
  const char* kind;
  double delta, gamma;
  uint64_t n;
  double p_e, epsilon;
  uint64_t samples;
  double mean_rate, std_error;
  const char* certificate_id;
  uint64_t seed;
  double primal, dual, primal_residual;
  const char* certificate_json;
} sdirng_row;

SDIRNG_API void sdirng_sweep_spec_default(sdirng_sweep_spec* spec);
SDIRNG_API int sdirng_sweep(const sdirng_sweep_spec* spec, sdirng_table** out);
SDIRNG_API size_t sdirng_table_rows(const sdirng_table* t);
SDIRNG_API int sdirng_table_row(const sdirng_table* t, size_t i, sdirng_row* out);
SDIRNG_API void sdirng_table_free(sdirng_table* t);

typedef struct {
  uint64_t instances;
  double worst, threshold;
  int upper_limit;
  int passed;
} sdirng_validation_summary;

/* offending receives the replay JSON of a failing instance (may be NULL) */
SDIRNG_API int sdirng_validate(const char* suite, uint64_t instances, uint64_t seed, sdirng_validation_summary* out,
                               char* offending, size_t cap, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* SDIRNG_SDIRNG_H */
