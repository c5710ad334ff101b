// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#include "caliloss/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace caliloss {

std::uint64_t bucket_estimate_sample_requirement(double eps, double delta) {
  if (!(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta < 1.0)) {
    raise(errc::parameter_out_of_range, "eps in (0,1], delta in (0,1) required");
  }
  return static_cast<std::uint64_t>(
      std::ceil(3.0 * std::log(2.0 / delta) / (eps * eps)));
}

std::vector<double> estimate_bucket_masses(
    const empirical_distribution& samples,
    const std::vector<std::vector<std::size_t>>& buckets, double eps,
    double delta) {
  const std::uint64_t need = bucket_estimate_sample_requirement(eps, delta);
  if (samples.m < need) {
    std::ostringstream os;
    os << "need at least " << need << " samples for accuracy " << eps
       << " at confidence " << 1.0 - delta << ", got " << samples.m;
    raise(errc::insufficient_samples, os.str());
  }
  std::vector<double> out;
  out.reserve(buckets.size());
  for (const auto& bucket : buckets) {
    std::uint64_t hits = 0;
    for (std::size_t x : bucket) hits += samples.counts[x];
    out.push_back(static_cast<double>(hits) / static_cast<double>(samples.m));
  }
  return out;
}

namespace {

void check_params(const approx_calibration_params& params) {
  if (!(params.alpha1 > 0.0 && params.alpha1 <= 1.0) ||
      !(params.alpha2 > 0.0 && params.alpha2 <= 1.0)) {
    raise(errc::parameter_out_of_range, "alpha1 and alpha2 must lie in (0, 1]");
  }
  if (!(params.delta > 0.0 && params.delta < 1.0)) {
    raise(errc::parameter_out_of_range, "delta must lie in (0, 1)");
  }
}

/// Bucket index in 1..b+1 for a q-value: bucket i covers (w^i, w^(i-1)].
std::size_t bucket_index(double qx, double log_w, std::size_t b) {
  if (qx <= 0.0) return b + 1;
  double pos = std::floor(std::log(qx) / log_w) + 1.0;
  if (pos < 1.0) pos = 1.0;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i > b + 1) i = b + 1;
  // Guard against last-ulp misplacement at bucket edges.
  while (i > 1 && qx > std::exp(log_w * static_cast<double>(i - 1))) --i;
  while (i <= b && qx <= std::exp(log_w * static_cast<double>(i))) ++i;
  return i;
}

}  // namespace

std::pair<distribution, construction_trace> make_approx_calibrated(
    const distribution& q, const sampler& p_source,
    const approx_calibration_params& params, std::uint64_t seed,
    double sample_multiplier) {
  check_params(params);
  if (!(sample_multiplier > 0.0)) {
    raise(errc::parameter_out_of_range, "sample multiplier must be positive");
  }
  const std::size_t n = q.size();
  if (p_source.size() != n) {
    raise(errc::domain_mismatch, "sampler and q have different domains");
  }

  construction_trace trace;
  trace.gamma1 = params.alpha1 / 3.0;
  trace.width = 1.0 - trace.gamma1 / 8.0;
  const double log_w = std::log(trace.width);
  trace.bucket_count = static_cast<std::size_t>(std::ceil(
      std::log(trace.gamma1 / (8.0 * static_cast<double>(n))) / log_w));
  const std::size_t b = trace.bucket_count;

  trace.estimate_accuracy =
      trace.gamma1 * params.alpha2 / (8.0 * static_cast<double>(b + 1));
  trace.low_mass_threshold = params.alpha2 / (4.0 * static_cast<double>(b + 1));
  trace.samples_required = bucket_estimate_sample_requirement(
      trace.estimate_accuracy, params.delta / static_cast<double>(b + 1));
  trace.sample_multiplier = sample_multiplier;
  trace.samples_used = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(
             sample_multiplier * static_cast<double>(trace.samples_required))));

  // Assign elements to buckets; only occupied buckets take part.
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t x = 0; x < n; ++x) {
    members[bucket_index(q.at(x), log_w, b)].push_back(x);
  }

  const empirical_distribution counts =
      p_source.draw_counts(trace.samples_used, seed);

  std::vector<std::size_t> low_union;
  double w_norm = 0.0;
  std::vector<double> weights(n, 0.0);
  for (auto& [index, elems] : members) {
    bucket_record rec;
    rec.index = index;
    rec.upper = index == 1 ? 1.0 : std::exp(log_w * static_cast<double>(index - 1));
    rec.lower = index == b + 1 ? 0.0 : std::exp(log_w * static_cast<double>(index));
    rec.elements = elems.size();
    std::uint64_t hits = 0;
    for (std::size_t x : elems) hits += counts.counts[x];
    rec.estimate = static_cast<double>(hits) / static_cast<double>(counts.m);
    rec.low_mass = rec.estimate <= trace.low_mass_threshold;
    if (rec.low_mass) {
      low_union.insert(low_union.end(), elems.begin(), elems.end());
    } else {
      const double share = rec.estimate / static_cast<double>(elems.size());
      for (std::size_t x : elems) weights[x] = share;
      w_norm += rec.estimate;
    }
    trace.occupied.push_back(rec);
  }
  if (!low_union.empty()) {
    trace.low_mass_reassigned = params.alpha2 / 2.0;
    const double share =
        params.alpha2 / (2.0 * static_cast<double>(low_union.size()));
    for (std::size_t x : low_union) weights[x] = share;
    w_norm += trace.low_mass_reassigned;
  }
  trace.w_norm = w_norm;
  if (!(w_norm > 0.0)) {
    raise(errc::degenerate_input, "construction produced an all-zero weight vector");
  }
  for (double& w : weights) w /= w_norm;
  return {validate_distribution(std::move(weights), q.dom()), std::move(trace)};
}

approx_calibration_report is_approx_calibrated(
    const distribution& q, const distribution& p,
    const approx_calibration_params& params, double level_rel_tol) {
  if (!q.same_domain(p)) raise(errc::domain_mismatch, "q and p have different domains");
  check_params(params);
  approx_calibration_report report;
  const level_set_partition part = level_sets(q, level_rel_tol);
  report.level_count = part.levels.size();
  report.lower_bound_ok = true;
  double witness_mass = 0.0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (const level_set& level : part.levels) {
    const double qb = q.mass(level.indices);
    const double pb = p.mass(level.indices);
    if (qb < (1.0 - params.alpha1) * pb) report.lower_bound_ok = false;
    if (pb > 0.0) worst_ratio = std::min(worst_ratio, qb / pb);
    if (qb > (1.0 + params.alpha1) * pb) {
      witness_mass += qb;
      report.witness_levels += 1;
    }
  }
  report.witness_mass = witness_mass;
  report.worst_under_ratio = worst_ratio;
  report.witness_mass_ok = witness_mass <= params.alpha2;
  report.passes = report.lower_bound_ok && report.witness_mass_ok;
  return report;
}

}  // namespace caliloss
