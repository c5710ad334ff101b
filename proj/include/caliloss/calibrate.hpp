// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "caliloss/distribution.hpp"

namespace caliloss {

struct approx_calibration_params {
  double alpha1 = 0.0;  // in (0, 1]
  double alpha2 = 0.0;  // in (0, 1]
  double delta = 0.0;   // in (0, 1)
};

/// Count-fraction estimates of p(B) per bucket. The Chernoff requirement
/// m >= 3 ln(2/delta) / eps^2 guarantees each estimate is within eps with
/// probability 1 - delta; callers split delta across buckets themselves.
std::vector<double> estimate_bucket_masses(
    const empirical_distribution& samples,
    const std::vector<std::vector<std::size_t>>& buckets, double eps,
    double delta);

std::uint64_t bucket_estimate_sample_requirement(double eps, double delta);

struct bucket_record {
  std::size_t index = 0;   // 1-based bucket number, b+1 is the catch-all
  double lower = 0.0;      // bucket covers q_x in (lower, upper]
  double upper = 0.0;
  std::size_t elements = 0;
  double estimate = 0.0;   // p~(bucket)
  bool low_mass = false;   // classified into L
};

/// Everything the construction computed, for inspection and JSON dumps.
struct construction_trace {
  double gamma1 = 0.0;
  std::size_t bucket_count = 0;  // b; the catch-all is bucket b+1
  double width = 0.0;            // multiplicative width factor (1 - gamma1/8)
  double estimate_accuracy = 0.0;
  double low_mass_threshold = 0.0;
  std::uint64_t samples_required = 0;  // explicit Chernoff count
  std::uint64_t samples_used = 0;
  double sample_multiplier = 1.0;
  std::vector<bucket_record> occupied;  // only buckets holding elements
  double w_norm = 0.0;
  double low_mass_reassigned = 0.0;  // alpha2/2 when L is nonempty, else 0
};

/// Rounds q into multiplicative buckets, estimates each bucket's p-mass
/// from samples, floors the low-mass buckets at a shared alpha2/2 share
/// and renormalizes. With enough samples the output is (alpha1, alpha2)-
/// approximately calibrated w.r.t. p with probability >= 1 - delta. Only
/// draws through the sampler; never reads p's vector.
std::pair<distribution, construction_trace> make_approx_calibrated(
    const distribution& q, const sampler& p_source,
    const approx_calibration_params& params, std::uint64_t seed,
    double sample_multiplier = 1.0);

struct approx_calibration_report {
  bool passes = false;
  bool lower_bound_ok = false;   // q(B_t) >= (1 - alpha1) p(B_t) for all t
  bool witness_mass_ok = false;  // q(union of overweighted levels) <= alpha2
  double witness_mass = 0.0;
  double worst_under_ratio = 1.0;  // min over t of q(B_t) / p(B_t)
  std::size_t witness_levels = 0;
  std::size_t level_count = 0;
};

/// Test-side certifier against the exact p. The witness set is chosen
/// greedily as every level with q(B_t) > (1 + alpha1) p(B_t); since moving
/// a level into T only relaxes its constraint and T's only cost is its
/// q-mass, the greedy witness passes iff some witness passes.
approx_calibration_report is_approx_calibrated(
    const distribution& q, const distribution& p,
    const approx_calibration_params& params, double level_rel_tol = 0.0);

}  // namespace caliloss
