// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "caliloss/harness.hpp"

namespace caliloss {
namespace verify {

struct check_outcome {
  std::string name;
  bool pass = false;
  double worst = 0.0;        // most adverse observed value for the check
  double threshold = 0.0;    // the pinned tolerance it is compared against
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::string detail;
};

struct suite_result {
  std::string suite;
  std::vector<check_outcome> checks;
  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }
};

/// One enumeration pass over random rational targets covering, for every
/// catalog loss: nonnegative gaps with strictness off the target, the
/// closed-form gap bound, the conditional-inverse-mean identity and the
/// q_x >= p_x/N mass bound. loglog runs on targets mixed toward uniform
/// until every probability is at most 1/e.
suite_result properness_sweep(std::size_t trials, std::size_t n_min,
                              std::size_t n_max, std::uint64_t seed,
                              unsigned threads = 0);

/// Random full-support pairs: |log-loss gap - KL| and Pinsker.
suite_result kl_pinsker(std::size_t pairs, std::size_t n_max, std::uint64_t seed);

/// Generator-vs-closed-form divergence agreement, exact quadratic
/// divergence, and the inverse-root l1 strong-properness witness.
suite_result bregman(std::size_t pairs, std::size_t n_max, std::uint64_t seed);

/// gap * N = 2 while the l1 distance stays 2, over even domains.
suite_result l2_weakness(std::size_t n_max);

/// Grid certificates for every catalog loss.
suite_result concavity(std::size_t grid_points);

/// coarsen() output certifies as calibrated at 1e-12 for random partitions.
suite_result coarsen_calibration(std::size_t trials, std::size_t n_max,
                                 std::uint64_t seed);

/// The strong-concave-gap bound never exceeds the actual Jensen gap.
suite_result jensen_gap(std::size_t trials, std::uint64_t seed);

/// Dispatch by suite name ("strict-properness", "kl-pinsker", "bregman",
/// "l2-weakness", "concavity", "coarsen-calibration", "jensen-gap").
suite_result run_suite(const std::string& name, std::size_t trials,
                       std::size_t n_max, std::uint64_t seed,
                       unsigned threads = 0);

std::vector<std::string> suite_names();

}  // namespace verify
}  // namespace caliloss
