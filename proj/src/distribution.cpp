// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#include "caliloss/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace caliloss {

const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "ok";
    case errc::negative_probability: return "NegativeProbability";
    case errc::sum_out_of_tolerance: return "SumOutOfTolerance";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::domain_too_large: return "DomainTooLarge";
    case errc::invalid_partition: return "InvalidPartition";
    case errc::zero_mass_bucket: return "ZeroMassBucket";
    case errc::missing_rate: return "MissingRate";
    case errc::growth_envelope_too_fast: return "GrowthEnvelopeTooFast";
    case errc::unsupported_loss: return "UnsupportedLoss";
    case errc::parameter_out_of_range: return "ParameterOutOfRange";
    case errc::insufficient_samples: return "InsufficientSamples";
    case errc::degenerate_input: return "DegenerateInput";
    case errc::invalid_shape: return "InvalidShape";
    case errc::undefined_gradient: return "UndefinedGradient";
    case errc::odd_domain: return "OddDomain";
    case errc::empty_corpus: return "EmptyCorpus";
    case errc::bad_line: return "BadLine";
    case errc::alphabet_mismatch: return "AlphabetMismatch";
    case errc::io_error: return "IoError";
    case errc::parse_error: return "ParseError";
    case errc::internal: return "Internal";
  }
  return "Unknown";
}

double distribution::mass(const std::vector<std::size_t>& indices) const {
  double total = 0.0;
  for (std::size_t x : indices) total += probs_[x];
  return total;
}

distribution validate_distribution(std::vector<double> probs, domain dom) {
  if (dom.size == 0 || probs.size() != dom.size) {
    raise(errc::invalid_shape, "probability vector length does not match domain size");
  }
  if (!dom.labels.empty()) {
    if (dom.labels.size() != dom.size) {
      raise(errc::invalid_shape, "label count does not match domain size");
    }
    std::set<std::string> unique(dom.labels.begin(), dom.labels.end());
    if (unique.size() != dom.labels.size()) {
      raise(errc::invalid_shape, "labels must be unique");
    }
  }
  double sum = 0.0;
  for (std::size_t x = 0; x < probs.size(); ++x) {
    double v = probs[x];
    if (!(v >= 0.0)) {  // also rejects NaN
      std::ostringstream os;
      os << "negative probability " << v << " at index " << x;
      raise(errc::negative_probability, os.str());
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "probabilities sum to " << sum << ", outside 1 +/- " << kSumTolerance;
    raise(errc::sum_out_of_tolerance, os.str());
  }
  distribution d;
  d.dom_ = std::move(dom);
  d.probs_ = std::move(probs);
  return d;
}

distribution make_distribution(std::vector<double> probs) {
  domain dom;
  dom.size = probs.size();
  return validate_distribution(std::move(probs), std::move(dom));
}

distribution uniform_distribution(std::size_t n) {
  return make_distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

distribution point_mass(std::size_t n, std::size_t x) {
  std::vector<double> probs(n, 0.0);
  probs.at(x) = 1.0;
  return make_distribution(std::move(probs));
}

distribution empirical_distribution::to_distribution() const {
  std::vector<double> probs(counts.size());
  for (std::size_t x = 0; x < counts.size(); ++x) probs[x] = fraction(x);
  return validate_distribution(std::move(probs), dom);
}

std::size_t level_set_partition::level_of(std::size_t x) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t y : levels[i].indices) {
      if (y == x) return i;
    }
  }
  raise(errc::internal, "index not covered by level sets");
}

level_set_partition level_sets(const distribution& q, double rel_tol) {
  const std::size_t n = q.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return q.at(a) < q.at(b);
  });

  level_set_partition part;
  part.source = q.probs();
  for (std::size_t k = 0; k < n; ++k) {
    const double v = q.at(order[k]);
    bool fresh = part.levels.empty();
    if (!fresh) {
      const double rep = part.levels.back().value;
      const double gap = std::abs(v - rep);
      fresh = rel_tol == 0.0 ? v != rep
                             : gap > rel_tol * std::max({std::abs(v), std::abs(rep), 1e-300});
    }
    if (fresh) {
      part.levels.push_back(level_set{v, {}});
    }
    part.levels.back().indices.push_back(order[k]);
  }
  return part;
}

calibration_report is_calibrated(const distribution& q, const distribution& p,
                                 double tol, double level_rel_tol) {
  if (!q.same_domain(p)) raise(errc::domain_mismatch, "q and p have different domains");
  calibration_report report;
  report.tolerance = tol;
  const level_set_partition part = level_sets(q, level_rel_tol);
  for (const level_set& level : part.levels) {
    calibration_level_record rec;
    rec.value = level.value;
    rec.q_mass = q.mass(level.indices);
    rec.p_mass = p.mass(level.indices);
    rec.count = level.indices.size();
    report.max_discrepancy =
        std::max(report.max_discrepancy, std::abs(rec.q_mass - rec.p_mass));
    report.levels.push_back(std::move(rec));
  }
  report.calibrated = report.max_discrepancy <= tol;
  return report;
}

distribution coarsen(const distribution& p,
                     const std::vector<std::vector<std::size_t>>& partition) {
  const std::size_t n = p.size();
  std::vector<bool> seen(n, false);
  std::vector<double> out(n, 0.0);
  for (const auto& block : partition) {
    if (block.empty()) raise(errc::invalid_partition, "empty block");
    double total = 0.0;
    for (std::size_t x : block) {
      if (x >= n || seen[x]) {
        raise(errc::invalid_partition, "partition does not cover each index exactly once");
      }
      seen[x] = true;
      total += p.at(x);
    }
    const double avg = total / static_cast<double>(block.size());
    for (std::size_t x : block) out[x] = avg;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!seen[x]) raise(errc::invalid_partition, "partition misses an index");
  }
  return validate_distribution(std::move(out), p.dom());
}

void for_each_set_partition(
    std::size_t n,
    const std::function<void(const std::vector<std::vector<std::size_t>>&)>&
        visit) {
  if (n == 0) return;
  // Restricted growth strings: a[i] <= 1 + max(a[0..i-1]).
  std::vector<std::size_t> assign(n, 0);
  std::vector<std::vector<std::size_t>> blocks;
  const std::function<void(std::size_t, std::size_t)> rec =
      [&](std::size_t i, std::size_t used) {
        if (i == n) {
          blocks.assign(used, {});
          for (std::size_t x = 0; x < n; ++x) blocks[assign[x]].push_back(x);
          visit(blocks);
          return;
        }
        for (std::size_t b = 0; b <= used && b < n; ++b) {
          assign[i] = b;
          rec(i + 1, std::max(used, b + 1));
        }
      };
  rec(0, 0);
}

std::vector<distribution> enumerate_calibrated(const distribution& p,
                                               std::size_t max_n) {
  const std::size_t n = p.size();
  if (n > max_n) {
    std::ostringstream os;
    os << "domain size " << n << " exceeds enumeration cap " << max_n;
    raise(errc::domain_too_large, os.str());
  }
  std::vector<std::vector<double>> vectors;
  for_each_set_partition(n, [&](const std::vector<std::vector<std::size_t>>& part) {
    vectors.push_back(coarsen(p, part).probs());
  });
  std::sort(vectors.begin(), vectors.end());
  std::vector<std::vector<double>> kept;
  const auto matches = [n](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t x = 0; x < n; ++x) {
      if (std::abs(a[x] - b[x]) > kDedupComponentTol) return false;
    }
    return true;
  };
  for (const auto& v : vectors) {
    // Near-duplicates can be separated in lexicographic order by vectors
    // sharing an equal prefix, so scan the whole window of kept vectors
    // whose leading component is still within tolerance.
    bool duplicate = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (std::abs((*it)[0] - v[0]) > kDedupComponentTol) break;
      if (matches(*it, v)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(v);
  }
  std::vector<distribution> out;
  out.reserve(kept.size());
  for (auto& v : kept) out.push_back(validate_distribution(std::move(v), p.dom()));
  return out;
}

double l1_distance(const distribution& p, const distribution& q) {
  if (!p.same_domain(q)) raise(errc::domain_mismatch, "p and q have different domains");
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) total += std::abs(p.at(x) - q.at(x));
  return total;
}

double tv_distance(const distribution& p, const distribution& q) {
  return 0.5 * l1_distance(p, q);
}

double kl_divergence(const distribution& p, const distribution& q) {
  if (!p.same_domain(q)) raise(errc::domain_mismatch, "p and q have different domains");
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double px = p.at(x);
    if (px == 0.0) continue;
    const double qx = q.at(x);
    if (qx == 0.0) return std::numeric_limits<double>::infinity();
    total += px * std::log(px / qx);
  }
  return total;
}

sampler::sampler(const distribution& p) : dom_(p.dom()) {
  cumulative_.resize(p.size());
  double acc = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    acc += p.at(x);
    cumulative_[x] = acc;
  }
  cumulative_.back() = std::max(cumulative_.back(), 1.0);
}

std::size_t sampler::draw(splitmix64& gen) const {
  const double u = gen.next_double();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cumulative_.begin(),
      static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
}

empirical_distribution sampler::draw_counts(std::uint64_t m,
                                            std::uint64_t seed) const {
  empirical_distribution emp;
  emp.dom = dom_;
  emp.counts.assign(cumulative_.size(), 0);
  emp.m = m;
  splitmix64 gen(seed);
  for (std::uint64_t i = 0; i < m; ++i) emp.counts[draw(gen)]++;
  return emp;
}

empirical_distribution sample(const distribution& p, std::uint64_t m,
                              std::uint64_t seed) {
  if (m == 0) raise(errc::parameter_out_of_range, "sample count must be >= 1");
  return sampler(p).draw_counts(m, seed);
}

double conditional_inverse_mean(const distribution& p,
                                const std::vector<std::size_t>& bucket) {
  const double pb = p.mass(bucket);
  if (bucket.empty() || pb <= 0.0) {
    raise(errc::zero_mass_bucket, "bucket has zero probability mass");
  }
  for (std::size_t x : bucket) {
    if (p.at(x) <= 0.0) raise(errc::zero_mass_bucket, "bucket contains a zero-probability element");
  }
  return static_cast<double>(bucket.size()) / pb;
}

double min_mass_ratio(const distribution& q, const distribution& p) {
  if (!q.same_domain(p)) raise(errc::domain_mismatch, "q and p have different domains");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p.at(x) > 0.0) best = std::min(best, q.at(x) / p.at(x));
  }
  return best;
}

}  // namespace caliloss
