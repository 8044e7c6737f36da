// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace sdirng {

// splitmix64 finalizer over (seed, index)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// mt19937_64 with a fixed double conversion so streams are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // [0, 1) with 53 bits
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t below(std::uint64_t n);
  double normal();
  Rng split(std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sdirng
