// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

namespace sdirng {

// Randomized self-checks of the security statements.
//   thm1        lambda_min(G -+ C) over random dilations
//   thm2        single-bit bound minus exact XOR distance, n_r <= 5
//   thm3        multi-bit bound minus exact distance for verified g
//   thm4        epsilon minus exhaustive average distance, n <= 5
//   identities  |sum Q - 1| and |G - sum (4 nu - 1) Q|
struct ValidationReport {
  std::string suite;
  std::string metric;
  std::size_t instances = 0;
  double worst = 0;
  double threshold = 0;
  bool upper_limit = false;  // worst must stay <= threshold instead of >=
  bool passed = true;
  std::string offending;     // JSON of the worst failing instance, empty on pass
};

ValidationReport run_validation(const std::string& suite, std::size_t instances, std::uint64_t seed);

}  // namespace sdirng
