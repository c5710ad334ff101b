// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "caliloss/bounds.hpp"
#include "caliloss/distribution.hpp"
#include "caliloss/losses.hpp"

namespace caliloss {

struct summary_stats {
  std::size_t trials = 0;
  double mean = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double failure_rate = 0.0;
};

/// One Monte Carlo run: the per-trial primary statistic (trial order is
/// the trial index, independent of scheduling), a reduced summary, and
/// kind-specific scalars under stats. Reproducible from (config, seed).
struct experiment_result {
  std::string kind;
  std::uint64_t seed = 0;
  std::map<std::string, double> config;
  std::vector<double> per_trial;
  std::vector<std::uint8_t> per_trial_flag;  // meaning depends on kind
  summary_stats summary;
  std::map<std::string, double> stats;
};

summary_stats summarize(const std::vector<double>& values,
                        const std::vector<std::uint8_t>& failures);

/// Deviation |l(q; phat) - l(q; p)| over seeded trials; a trial fails when
/// the deviation reaches gamma. An infinite true loss is reported via
/// stats["true_loss_infinite"], not thrown (the non-concentration demo).
experiment_result run_concentration(const local_loss& loss, const distribution& p,
                                    const distribution& q, std::uint64_t m,
                                    std::size_t trials, double gamma,
                                    std::uint64_t seed, unsigned threads = 0);

/// Per-trial gap l(q; phat) - l(p; phat); success means the target wins.
experiment_result run_sample_properness(const local_loss& loss,
                                        const distribution& p,
                                        const distribution& q, std::uint64_t m,
                                        std::size_t trials, std::uint64_t seed,
                                        unsigned threads = 0);

/// p uniform, q uniform off one element: the true log loss is infinite but
/// the empirical loss is finite whenever the dropped element is unsampled,
/// which happens with probability (1 - 1/N)^m.
experiment_result demo_logloss_nonconcentration(std::size_t n, std::uint64_t m,
                                                std::size_t trials,
                                                std::uint64_t seed,
                                                unsigned threads = 0);

/// The linear-loss sample-improperness construction: p has a +-1/sqrt(m)
/// bump on two elements and lives on half the domain; q is the calibrated
/// two-level smoothing. Reports how often l(q; phat) < l(p; phat).
experiment_result demo_linear_loss_improperness(std::size_t n, std::uint64_t m,
                                                std::size_t trials,
                                                std::uint64_t seed,
                                                unsigned threads = 0);

/// Builds the improperness demo's p and q (exposed for structural tests).
void linear_improperness_construction(std::size_t n, std::uint64_t m,
                                      distribution* p, distribution* q);

struct rational_p_options {
  std::size_t denominator = 10000;
  double max_prob = 1.0;  // mix toward uniform until max p_x is below this
  bool full_support = true;
};

/// Dirichlet-like draw (normalized exponentials) rounded to a common
/// denominator so the brute-force oracles work on exact-ish rationals.
distribution random_rational_distribution(std::size_t n, splitmix64& gen,
                                          const rational_p_options& opts = {});

/// Oracle sweep for the strong-properness bound: random rational targets,
/// every enumerated calibrated candidate, per-trial minimum of
/// (actual gap - closed-form gap bound). Fails when a slack dips
/// under -1e-9.
experiment_result sweep_strong_properness(const local_loss& loss,
                                          std::size_t n_max, std::size_t trials_p,
                                          std::uint64_t seed,
                                          unsigned threads = 0);

/// Static-partition parallel map over trial indices; writers touch
/// disjoint slots so results do not depend on the schedule.
void parallel_for_trials(std::size_t trials, unsigned threads,
                         const std::function<void(std::size_t)>& body);

}  // namespace caliloss
