// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace caliloss {

/// Counter-based pseudo-random generator (splitmix64). Cheap to seed, so
/// every trial of a Monte Carlo run gets its own stream derived from
/// seed ^ trial_index without correlation between streams.
class splitmix64 {
public:
  explicit splitmix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double next_double_open() { return 1.0 - next_double(); }

  double next_exponential() { return -std::log(next_double_open()); }

private:
  std::uint64_t state_;
};

/// Per-trial stream derivation used across the harness: trial i of a run
/// seeded with s draws from splitmix64(s ^ i).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t trial) {
  return seed ^ trial;
}

}  // namespace caliloss
