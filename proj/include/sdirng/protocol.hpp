// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdirng/behavior.hpp"
#include "sdirng/dilation.hpp"
#include "sdirng/extractor.hpp"
#include "sdirng/guessing.hpp"

namespace sdirng {

enum class ExtractorType : std::uint8_t { SingleBit = 0, MultiBit = 1 };

const char* to_string(ExtractorType t);
ExtractorType extractor_type_from_string(const std::string& s);

struct ProtocolConfig {
  std::uint64_t n = 1000;
  double p_e = 0.5;
  double epsilon = 1e-6;
  ExtractorType extractor = ExtractorType::MultiBit;
  double delta = 0.5;
  std::uint64_t seed = 1;
  // cap multi-bit output at n_r - 1 (constructible extractors need m < n_r)
  bool cap_constructible = true;

  double p_r() const { return 1.0 - p_e; }
  void validate() const;
};

enum class RoundLabel : std::uint8_t { Estimation = 0, RawKey = 1 };

struct Tuple {
  std::uint8_t a = 0, x = 0;
  bool operator==(const Tuple&) const = default;
};

// c[a][x] = number of estimation rounds with outcome a on input x
struct EstimationCounts {
  std::array<std::array<std::uint64_t, 2>, 2> c{};
  std::uint64_t total() const { return c[0][0] + c[0][1] + c[1][0] + c[1][1]; }
  bool operator==(const EstimationCounts&) const = default;
};

struct ProtocolTranscript {
  std::vector<RoundLabel> labels;
  std::vector<Tuple> z;             // estimation rounds in order
  std::vector<std::uint8_t> raw;    // raw-key outcomes in order
  EstimationCounts counts;

  std::uint64_t n_e() const { return z.size(); }
  std::uint64_t n_r() const { return raw.size(); }
};

// Round i: t_i ~ Bernoulli(p_r) picks raw-key, estimation rounds draw
// x uniformly, then a ~ p(.|x). One uniform per decision, in that order.
ProtocolTranscript run_rounds(const ProtocolConfig& cfg, const Behavior& b);

struct CountsOnly {
  EstimationCounts counts;
  std::uint64_t n_r = 0;
};
// same random stream as run_rounds, without storing the transcript
CountsOnly simulate_counts(const ProtocolConfig& cfg, const Behavior& b);

struct LengthSolution {
  Table2 alpha{};
  double beta = 0;
  DualCertificate certificate;
  double objective = -1e300;  // f(alpha, beta)
  std::uint64_t m_out = 0;
  bool feasible = false;
  double residual = 0;        // worst violation of the equality constraints
  std::string diagnostic;
};

// f for given parameters
double length_objective(ExtractorType t, const EstimationCounts& counts, std::uint64_t n_r,
                        const Table2& alpha, double beta, double epsilon);
// worst |p_r sqrt(2^{beta-1})(4 nu - 1) + p_e sqrt(2^alpha) - 1| (multi-bit) or
// the single-bit analogue
double constraint_residual(ExtractorType t, const LengthSolution& s, double p_e);

struct WeightedSolution {
  Table2 alpha{};
  double beta = 0;
  DualCertificate certificate;
  double value = 0;  // sum w_z alpha_z + raw_weight * (beta or beta - 1)
  bool converged = false;
};

// Global maximum of the weighted length objective over (alpha, beta, nu, H)
// subject to the per-tuple equality constraints and dual feasibility.
WeightedSolution maximize_weighted(ExtractorType t, const Table2& weights, double raw_weight, double p_e,
                                   OverlapBound delta);

LengthSolution solve_length(ExtractorType t, const EstimationCounts& counts, std::uint64_t n_r,
                            const ProtocolConfig& cfg);
std::uint64_t output_length(ExtractorType t, double objective, std::uint64_t n_r, bool cap_constructible);

struct ProtocolRun {
  ProtocolTranscript transcript;
  LengthSolution length;
  std::optional<std::uint32_t> output;
};

// g may be null; required only for multi-bit runs with m_out > 0
ProtocolRun run_protocol(const ProtocolConfig& cfg, const Behavior& b, const ExtractorFunction* g);

struct IdentityResiduals {
  double sum_q = 0;   // |sum Q - 1|
  double g_form = 0;  // |G - sum (4 nu - 1) Q|
};
IdentityResiduals check_identities(const Dilation& d, const DualCertificate& c);

struct ExhaustiveSecurity {
  double average_distance = 0;
  double epsilon = 0;
  std::size_t transcripts = 0;
  std::size_t with_output = 0;
  double output_probability = 0;
};

using ExtractorProvider = std::function<const ExtractorFunction*(unsigned n_r, unsigned m)>;

// Enumerate every (t, z) for n <= 6 rounds with the same dilation per round
// and a joint memory state over all n rounds; Eve purifies the conditional
// raw-round memory.
ExhaustiveSecurity exhaustive_security(const ProtocolConfig& cfg, const Dilation& per_round,
                                       const ComplexMatrix& joint_sigma, const ExtractorProvider& extractors);

// transcript file
struct TranscriptFile {
  ProtocolConfig config;
  ProtocolTranscript transcript;
};
void save_transcript(const ProtocolConfig& cfg, const ProtocolTranscript& t, const std::filesystem::path& path);
TranscriptFile load_transcript(const std::filesystem::path& path);

}  // namespace sdirng
