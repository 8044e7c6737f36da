// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdirng/behavior.hpp"
#include "sdirng/protocol.hpp"

namespace sdirng {

struct SampleRecord {
  std::uint64_t seed = 0;
  std::uint64_t n_r = 0;
  EstimationCounts counts;
  LengthSolution length;
};

struct RateEstimate {
  std::uint64_t n = 0;
  double mean_rate = 0;
  double std_error = 0;
  std::size_t samples = 0;
  ProtocolConfig config;
  std::vector<SampleRecord> records;
};

// Sample i uses seed derive_seed(cfg.seed, i).
RateEstimate finite_rate(const ProtocolConfig& cfg, const Behavior& b, std::size_t samples, unsigned workers = 1);

struct AsymptoticSolution {
  ExtractorType extractor = ExtractorType::MultiBit;
  double p_e = 0;
  double rate = 0;
  WeightedSolution solution;
  std::vector<std::pair<double, double>> scan;  // (p_e, rate) points visited
};

// Limit of E[f]/n: weights p_e p(a|x)/2 on alpha and p_r on beta (minus 1
// for the single-bit extractor). With no p_e, scans a logistic grid then
// refines by golden section.
AsymptoticSolution asymptotic_rate(ExtractorType t, const Behavior& b, OverlapBound delta,
                                   std::optional<double> p_e = std::nullopt);
AsymptoticSolution asymptotic_rate_mul(OverlapBound delta, std::optional<double> p_e = std::nullopt);

// objective must exceed this to count as nonnegative; the endpoints sit
// exactly at zero and solver noise must not flip them
inline constexpr double kXorPositivityTolerance = 1e-9;

std::optional<double> xor_asymptotic_min_pe(const Behavior& b, OverlapBound delta, std::span<const double> pe_grid);
std::optional<double> xor_asymptotic_min_pe(OverlapBound delta, std::span<const double> pe_grid);

std::vector<double> default_pe_grid();

// p_e maximizing f on the expected counts for n rounds
double tuned_pe(const Behavior& b, const ProtocolConfig& cfg);

enum class SweepKind { PguessVsDelta, RateVsNByDelta, RateVsNByGamma };
const char* to_string(SweepKind k);
SweepKind sweep_kind_from_string(const std::string& s);

struct SweepSpec {
  SweepKind kind = SweepKind::RateVsNByDelta;
  std::vector<double> deltas{0.5};
  std::vector<double> gammas{0.0};
  std::vector<std::uint64_t> ns{7000};
  std::optional<double> p_e;  // empty -> chosen per point
  bool tune_finite_pe = false;  // pick p_e per n instead of the asymptotic optimum
  double epsilon = 1e-6;
  ExtractorType extractor = ExtractorType::MultiBit;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool include_asymptotic = true;
};

// one CSV row; kind is "finite", "asymptotic", or "pguess"
struct SweepRow {
  std::string kind;
  double delta = 0, gamma = 0;
  std::uint64_t n = 0;
  double p_e = 0, epsilon = 0;
  std::size_t samples = 0;
  double mean_rate = 0, std_error = 0;
  std::string certificate_id;
  std::uint64_t seed = 0;
  // pguess rows
  double primal = 0, dual = 0, primal_residual = 0;
  std::string certificate_json;
};

struct SweepTable {
  SweepKind kind;
  std::vector<SweepRow> rows;
};

SweepTable sweep(const SweepSpec& spec);

// 16 hex digits of FNV-1a over the text
std::string certificate_id(const std::string& text);

}  // namespace sdirng
