// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sdirng/rng.hpp"

namespace sdirng {

inline constexpr unsigned kMaxExtractorInput = 24;

// g : {0,1}^n_r -> {0,1}^m as a lookup table. Input bit i is round i
// (round 1 in the least significant bit).
class ExtractorFunction {
 public:
  ExtractorFunction(unsigned n_r, unsigned m, std::vector<std::uint32_t> table, std::uint64_t seed = 0);

  static ExtractorFunction parity(unsigned n_r);
  static ExtractorFunction constant(unsigned n_r, unsigned m, std::uint32_t value = 0);

  unsigned n_r() const { return n_r_; }
  unsigned m() const { return m_; }
  std::uint64_t seed() const { return seed_; }
  bool verified() const { return verified_; }
  const std::vector<std::uint32_t>& table() const { return table_; }

  std::uint32_t operator()(std::uint32_t r) const { return table_[r]; }
  // bits[i] in {0,1}, size n_r
  std::uint32_t apply(std::span<const std::uint8_t> bits) const;

  void set_verified(bool v) { verified_ = v; }

 private:
  unsigned n_r_, m_;
  std::vector<std::uint32_t> table_;
  std::uint64_t seed_;
  bool verified_ = false;
};

// In-place unnormalized Walsh-Hadamard transform.
void fwht(std::span<std::int64_t> v);

// bias(k, r) * 2^n_r * 2^m as an exact integer:
// 2^m * sum_s [g(s)=k] (-1)^{r.s} - 2^n_r [r=0]
struct BiasSpectrum {
  unsigned n_r = 0, m = 0;
  std::vector<std::int64_t> scaled;  // index k * 2^n_r + r

  std::int64_t scaled_at(std::uint32_t k, std::uint32_t r) const { return scaled[(std::size_t{k} << n_r) + r]; }
  // the bias itself, 2^{-n_r} sum_s (-1)^{r.s} ([g(s)=k] - 2^{-m})
  double at(std::uint32_t k, std::uint32_t r) const;
};

BiasSpectrum bias_spectrum(const ExtractorFunction& g);

struct PropertyCheck {
  bool holds = true;
  std::uint32_t k = 0, r = 0;  // worst (k, r)
  double value = 0;            // |bias| at the worst pair, scaled by 2^n_r
  double bound = 0;            // n_r^2 2^{(n_r - m)/2}, same scale
};

// |sum_s (-1)^{r.s}([g(s)=k] - 2^-m)| <= n_r^2 sqrt(2^{n_r-m}) for all k, r.
// Exact integer comparison. Sets g.verified().
PropertyCheck check_property(ExtractorFunction& g, unsigned workers = 1);

struct Construction {
  ExtractorFunction g;
  std::size_t attempts;
};

// Uniformly random tables until one passes; throws Exhausted.
Construction construct_random_extractor(unsigned n_r, unsigned m, std::size_t max_attempts,
                                        std::uint64_t seed, unsigned workers = 1);

std::uint8_t xor_extract(std::span<const std::uint8_t> bits);

void save_extractor(const ExtractorFunction& g, const std::filesystem::path& path);
ExtractorFunction load_extractor(const std::filesystem::path& path);

}  // namespace sdirng
