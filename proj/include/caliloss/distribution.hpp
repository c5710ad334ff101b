// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "caliloss/error.hpp"
#include "caliloss/rng.hpp"

namespace caliloss {

/// Finite indexed sample space. Labels are optional; when present they are
/// unique and there is one per element.
struct domain {
  std::size_t size = 0;
  std::vector<std::string> labels;  // empty or size() entries

  bool operator==(const domain& other) const { return size == other.size; }
};

inline constexpr double kSumTolerance = 1e-9;

/// Dense probability vector over a domain. Immutable after construction;
/// entries may be zero but never negative, and the sum is within
/// kSumTolerance of one. Construction does not renormalize.
class distribution {
public:
  distribution() = default;

  const domain& dom() const { return dom_; }
  std::size_t size() const { return probs_.size(); }
  double at(std::size_t x) const { return probs_[x]; }
  const std::vector<double>& probs() const { return probs_; }

  /// p(B) for an index set B.
  double mass(const std::vector<std::size_t>& indices) const;

  bool same_domain(const distribution& other) const {
    return size() == other.size();
  }

  friend distribution validate_distribution(std::vector<double> probs,
                                            domain dom);

private:
  domain dom_;
  std::vector<double> probs_;
};

/// Checks invariants (no negative entry, sum within tolerance of 1) and
/// wraps the vector. Throws negative_probability / sum_out_of_tolerance.
distribution validate_distribution(std::vector<double> probs, domain dom);

/// Convenience: validate over an unlabeled domain of matching size.
distribution make_distribution(std::vector<double> probs);

distribution uniform_distribution(std::size_t n);
distribution point_mass(std::size_t n, std::size_t x);

/// Multinomial counts from m i.i.d. draws.
struct empirical_distribution {
  domain dom;
  std::vector<std::uint64_t> counts;
  std::uint64_t m = 0;

  double fraction(std::size_t x) const {
    return static_cast<double>(counts[x]) / static_cast<double>(m);
  }
  distribution to_distribution() const;
};

/// One level set of a candidate: the value t and B_t = {x : q_x = t}.
struct level_set {
  double value = 0.0;
  std::vector<std::size_t> indices;
};

/// The grouping of a candidate's domain by equal probability value. Keys
/// are T(q); the index sets partition the whole domain (zeros included).
struct level_set_partition {
  std::vector<level_set> levels;  // sorted by value ascending
  std::vector<double> source;    // the q it was computed from

  std::size_t level_of(std::size_t x) const;
};

/// Groups by exact bit equality when rel_tol == 0 (the default), else by
/// relative tolerance; coarsened outputs can carry last-bit noise.
level_set_partition level_sets(const distribution& q, double rel_tol = 0.0);

struct calibration_level_record {
  double value = 0.0;   // t
  double q_mass = 0.0;  // q(B_t)
  double p_mass = 0.0;  // p(B_t)
  std::size_t count = 0;
};

struct calibration_report {
  bool calibrated = false;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  std::vector<calibration_level_record> levels;
};

/// Def.-style check: q is calibrated w.r.t. p iff |q(B_t) - p(B_t)| <= tol
/// on every level set of q.
calibration_report is_calibrated(const distribution& q, const distribution& p,
                                 double tol, double level_rel_tol = 0.0);

/// Replaces probabilities on each block with the block average. The result
/// is calibrated with respect to p by construction.
distribution coarsen(const distribution& p,
                     const std::vector<std::vector<std::size_t>>& partition);

inline constexpr std::size_t kEnumerateDefaultMaxN = 12;
inline constexpr double kDedupComponentTol = 1e-12;

/// Brute-force oracle: every set partition of the domain, coarsened and
/// deduplicated. Exactly the calibrated set C(p). Bell-number growth, so
/// the domain size is capped.
std::vector<distribution> enumerate_calibrated(
    const distribution& p, std::size_t max_n = kEnumerateDefaultMaxN);

/// Visits every set partition of {0..n-1} (restricted growth strings).
void for_each_set_partition(
    std::size_t n,
    const std::function<void(const std::vector<std::vector<std::size_t>>&)>&
        visit);

double l1_distance(const distribution& p, const distribution& q);
double tv_distance(const distribution& p, const distribution& q);
/// KL(p, q) with 0*ln(0/q) = 0 and p_x > 0, q_x = 0 giving +infinity.
double kl_divergence(const distribution& p, const distribution& q);

/// Inverse-CDF multinomial sampling; deterministic given the seed.
empirical_distribution sample(const distribution& p, std::uint64_t m,
                              std::uint64_t seed);

/// Precomputed cumulative vector for repeated sampling from the same p.
class sampler {
public:
  explicit sampler(const distribution& p);
  std::size_t draw(splitmix64& gen) const;
  empirical_distribution draw_counts(std::uint64_t m,
                                     std::uint64_t seed) const;
  std::size_t size() const { return cumulative_.size(); }

private:
  std::vector<double> cumulative_;
  domain dom_;
};

/// E[1/p_X | X in B] = |B| / p(B).
double conditional_inverse_mean(const distribution& p,
                                const std::vector<std::size_t>& bucket);

/// min over supp(p) of q_x / p_x; >= 1/N when q is calibrated w.r.t. p.
double min_mass_ratio(const distribution& q, const distribution& p);

}  // namespace caliloss
