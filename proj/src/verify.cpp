// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#include "caliloss/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "caliloss/scoring.hpp"

namespace caliloss {
namespace verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct worst_tracker {
  double worst = kInf;  // track minima; flip sign for maxima
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::string detail;

  void see_min(double value, double threshold, const std::string& what) {
    ++checks;
    if (value < worst) {
      worst = value;
      detail = what;
    }
    if (value < threshold) ++violations;
  }
};

check_outcome outcome_min(const std::string& name, const worst_tracker& t,
                          double threshold) {
  check_outcome c;
  c.name = name;
  c.worst = t.checks == 0 ? kInf : t.worst;
  c.threshold = threshold;
  c.checks = t.checks;
  c.violations = t.violations;
  c.pass = t.violations == 0 && t.checks > 0;
  c.detail = t.detail;
  return c;
}

distribution random_full_support(std::size_t n, splitmix64& gen) {
  std::vector<double> raw(n);
  double total = 0.0;
  for (double& v : raw) {
    v = gen.next_exponential() + 1e-9;
    total += v;
  }
  for (double& v : raw) v /= total;
  return make_distribution(std::move(raw));
}

std::string describe(const char* what, const std::string& loss, std::size_t n) {
  std::ostringstream os;
  os << what << " loss=" << loss << " N=" << n;
  return os.str();
}

}  // namespace

suite_result properness_sweep(std::size_t trials, std::size_t n_min,
                              std::size_t n_max, std::uint64_t seed,
                              unsigned threads) {
  if (n_min < 2 || n_max > 8 || n_min > n_max) {
    raise(errc::parameter_out_of_range, "sweep supports 2 <= N <= 8");
  }
  const std::vector<local_loss> catalog = builtin_catalog();

  struct trial_worst {
    double gap = kInf;
    double strict_gap = kInf;
    double thm2_slack = kInf;
    double lemma1_neg_err = kInf;   // -|error|, so minima track the worst
    double mass_slack = kInf;
    std::string gap_d, strict_d, thm2_d, lemma1_d, mass_d;
  };
  std::vector<trial_worst> per_trial(trials);

  parallel_for_trials(trials, threads, [&](std::size_t t) {
    splitmix64 gen(derive_stream(seed, t));
    trial_worst& w = per_trial[t];

    for (const local_loss& loss : catalog) {
      const bool capped = loss.z_min > 1.0;  // loglog: probabilities <= 1/e
      rational_p_options opts;
      std::size_t lo = n_min;
      if (capped) {
        opts.max_prob = 1.0 / loss.z_min;
        lo = std::max<std::size_t>(n_min, 4);
      }
      const std::size_t n =
          lo + static_cast<std::size_t>(gen.next_u64() % (n_max - lo + 1));
      const distribution p = random_rational_distribution(n, gen, opts);
      const double lpp = expected_loss(loss, p, p);

      for (const distribution& q : enumerate_calibrated(p)) {
        const double eps = l1_distance(p, q);
        const double gap = expected_loss(loss, q, p) - lpp;
        if (gap < w.gap) {
          w.gap = gap;
          w.gap_d = describe("gap", loss.name, n);
        }
        if (eps > 0.0) {
          if (loss.strictly_concave && gap < w.strict_gap) {
            w.strict_gap = gap;
            w.strict_d = describe("strict gap", loss.name, n);
          }
          const double slack = gap - strong_properness_gap_bound(loss, n, eps);
          if (slack < w.thm2_slack) {
            w.thm2_slack = slack;
            w.thm2_d = describe("thm2 slack", loss.name, n);
          }
        }
        // Loss-independent identities, once per (p, q) pair.
        if (&loss == &catalog.front()) {
          for (const level_set& level : level_sets(q, 1e-12).levels) {
            const double lhs = conditional_inverse_mean(p, level.indices);
            const double t_val = p.mass(level.indices) /
                                 static_cast<double>(level.indices.size());
            const double err = -std::abs(lhs - 1.0 / t_val);
            if (err < w.lemma1_neg_err) {
              w.lemma1_neg_err = err;
              w.lemma1_d = describe("lemma1", "-", n);
            }
          }
          for (std::size_t x = 0; x < n; ++x) {
            const double slack = q.at(x) - p.at(x) / static_cast<double>(n);
            if (slack < w.mass_slack) {
              w.mass_slack = slack;
              w.mass_d = describe("mass bound", "-", n);
            }
          }
        }
      }
    }
  });

  worst_tracker gap_t, strict_t, thm2_t, lemma1_t, mass_t;
  for (const trial_worst& w : per_trial) {
    if (w.gap != kInf) gap_t.see_min(w.gap, -1e-9, w.gap_d);
    if (w.strict_gap != kInf) strict_t.see_min(w.strict_gap, 1e-12, w.strict_d);
    if (w.thm2_slack != kInf) thm2_t.see_min(w.thm2_slack, -1e-9, w.thm2_d);
    if (w.lemma1_neg_err != kInf) lemma1_t.see_min(w.lemma1_neg_err, -1e-9, w.lemma1_d);
    if (w.mass_slack != kInf) mass_t.see_min(w.mass_slack, -1e-12, w.mass_d);
  }
  // The mass bound is tight exactly at (uniform q, point-mass p).
  {
    const distribution p = point_mass(6, 2);
    const distribution u = uniform_distribution(6);
    const double ratio = min_mass_ratio(u, p);
    mass_t.see_min(ratio - 1.0 / 6.0, -1e-12, "point-mass witness");
    mass_t.see_min(1.0 / 6.0 - ratio, -1e-12, "point-mass witness tight");
  }

  suite_result result;
  result.suite = "strict-properness";
  result.checks.push_back(outcome_min("calibrated-properness-gap", gap_t, -1e-9));
  result.checks.push_back(outcome_min("strictness-off-target", strict_t, 1e-12));
  result.checks.push_back(outcome_min("strong-properness-thm2", thm2_t, -1e-9));
  result.checks.push_back(outcome_min("conditional-inverse-mean", lemma1_t, -1e-9));
  result.checks.push_back(outcome_min("calibrated-mass-bound", mass_t, -1e-12));
  return result;
}

suite_result kl_pinsker(std::size_t pairs, std::size_t n_max, std::uint64_t seed) {
  const local_loss log_loss = make_log_loss();
  worst_tracker identity_t, pinsker_t;
  splitmix64 gen(seed);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t n = 2 + gen.next_u64() % (n_max - 1);
    const distribution p = random_full_support(n, gen);
    const distribution q = random_full_support(n, gen);
    const double kl = kl_divergence(p, q);
    const double gap = expected_loss(log_loss, q, p) - expected_loss(log_loss, p, p);
    identity_t.see_min(-std::abs(gap - kl), -1e-9, describe("kl identity", "log", n));
    const double l1 = l1_distance(p, q);
    pinsker_t.see_min(kl - 0.5 * l1 * l1, -1e-12, describe("pinsker", "log", n));
  }
  suite_result result;
  result.suite = "kl-pinsker";
  result.checks.push_back(outcome_min("log-gap-equals-kl", identity_t, -1e-9));
  result.checks.push_back(outcome_min("pinsker", pinsker_t, -1e-12));
  return result;
}

suite_result bregman(std::size_t pairs, std::size_t n_max, std::uint64_t seed) {
  const std::vector<concave_generator> gens = builtin_generators();
  const concave_generator quad = make_quadratic_generator();
  const concave_generator invroot = make_invroot_generator();
  worst_tracker agree_t, quad_t, invroot_t, nonneg_t;
  splitmix64 gen(seed);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t n = 2 + gen.next_u64() % (n_max - 1);
    const distribution p = random_full_support(n, gen);
    const distribution q = random_full_support(n, gen);
    for (const concave_generator& g : gens) {
      const double via_div = divergence(g, p, q);
      const double via_loss =
          expected_generator_loss(g, q, p) - expected_generator_loss(g, p, p);
      agree_t.see_min(-std::abs(via_div - via_loss), -1e-9,
                      describe("bregman identity", g.name, n));
      nonneg_t.see_min(via_div, -1e-12, describe("divergence >= 0", g.name, n));
    }
    const double dq = divergence(quad, p, q);
    const double closed = quad.divergence_closed_form(p, q);
    quad_t.see_min(-std::abs(dq - closed), -1e-12, describe("quad exact", "quad", n));
    const double l1 = l1_distance(p, q);
    invroot_t.see_min(divergence(invroot, p, q) - 0.5 * l1 * l1, -1e-12,
                      describe("invroot strong", "invroot", n));
  }
  suite_result result;
  result.suite = "bregman";
  result.checks.push_back(outcome_min("generator-vs-direct", agree_t, -1e-9));
  result.checks.push_back(outcome_min("quadratic-exact-l2", quad_t, -1e-12));
  result.checks.push_back(outcome_min("invroot-l1-strong", invroot_t, -1e-12));
  result.checks.push_back(outcome_min("divergence-nonnegative", nonneg_t, -1e-12));
  return result;
}

suite_result l2_weakness(std::size_t n_max) {
  worst_tracker gap_t, dist_t;
  for (std::size_t n = 2; n <= n_max; n += 2) {
    const l2_counterexample_result r = l2_counterexample(n);
    gap_t.see_min(-std::abs(r.l2_gap * static_cast<double>(n) - 2.0), -1e-12,
                  describe("gap*N", "quad", n));
    dist_t.see_min(-std::abs(r.l1_dist - 2.0), -1e-12, describe("l1", "quad", n));
  }
  suite_result result;
  result.suite = "l2-weakness";
  result.checks.push_back(outcome_min("gap-times-n-equals-2", gap_t, -1e-12));
  result.checks.push_back(outcome_min("l1-distance-equals-2", dist_t, -1e-12));
  return result;
}

suite_result concavity(std::size_t grid_points) {
  worst_tracker slack_t, clean_t;
  reset_loglog_clamp_count();
  for (const local_loss& loss : builtin_catalog()) {
    const concavity_report report =
        check_left_strong_concavity(loss, default_z_grid(loss, grid_points));
    slack_t.see_min(-report.worst_slack, -1e-9, "f''+C/z^2 for " + loss.name);
    clean_t.see_min(report.ok ? 1.0 : -1.0, 0.0, "metadata invariants for " + loss.name);
  }
  clean_t.see_min(loglog_clamp_count() == 0 ? 1.0 : -1.0, 0.0, "loglog clamp fired");
  suite_result result;
  result.suite = "concavity";
  result.checks.push_back(outcome_min("left-strong-concavity", slack_t, -1e-9));
  result.checks.push_back(outcome_min("metadata-invariants", clean_t, 0.0));
  return result;
}

suite_result coarsen_calibration(std::size_t trials, std::size_t n_max,
                                 std::uint64_t seed) {
  worst_tracker cal_t;
  splitmix64 gen(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    const std::size_t n = 2 + gen.next_u64() % (n_max - 1);
    const distribution p = random_full_support(n, gen);
    // Random partition: independently assign each index to one of k blocks.
    const std::size_t k = 1 + gen.next_u64() % n;
    std::vector<std::vector<std::size_t>> blocks(k);
    for (std::size_t x = 0; x < n; ++x) blocks[gen.next_u64() % k].push_back(x);
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(),
                                [](const auto& b) { return b.empty(); }),
                 blocks.end());
    const distribution q = coarsen(p, blocks);
    const calibration_report rep = is_calibrated(q, p, 1e-12, 1e-12);
    cal_t.see_min(1e-12 - rep.max_discrepancy, 0.0, describe("coarsen", "-", n));
  }
  suite_result result;
  result.suite = "coarsen-calibration";
  result.checks.push_back(outcome_min("coarsen-is-calibrated", cal_t, 0.0));
  return result;
}

suite_result jensen_gap(std::size_t trials, std::uint64_t seed) {
  worst_tracker sound_t;
  splitmix64 gen(seed);
  const std::vector<local_loss> catalog = builtin_catalog();
  for (std::size_t i = 0; i < trials; ++i) {
    const std::size_t n = 2 + gen.next_u64() % 7;
    rational_p_options opts;
    opts.max_prob = 0.3;  // keep every loss, loglog included, in-domain
    if (n < 4) continue;
    const distribution p = random_rational_distribution(n, gen, opts);
    std::vector<std::size_t> bucket;
    for (std::size_t x = 0; x < n; ++x) {
      if (gen.next_double() < 0.6) bucket.push_back(x);
    }
    if (bucket.size() < 2) bucket = {0, 1};
    for (const local_loss& loss : catalog) {
      const double bound = jensen_gap_lower_bound(p, bucket, loss);
      const double actual = jensen_gap_actual(p, bucket, loss);
      sound_t.see_min(actual - bound, -1e-9,
                      describe("jensen", loss.name, n));
    }
  }
  suite_result result;
  result.suite = "jensen-gap";
  result.checks.push_back(outcome_min("gap-dominates-bound", sound_t, -1e-9));
  return result;
}

suite_result run_suite(const std::string& name, std::size_t trials,
                       std::size_t n_max, std::uint64_t seed, unsigned threads) {
  if (name == "strict-properness" || name == "properness") {
    return properness_sweep(trials, 2, std::min<std::size_t>(n_max, 8), seed, threads);
  }
  if (name == "kl-pinsker") return kl_pinsker(trials, std::min<std::size_t>(n_max, 64), seed);
  if (name == "bregman") return bregman(trials, std::min<std::size_t>(n_max, 64), seed);
  if (name == "l2-weakness") return l2_weakness(std::max<std::size_t>(n_max, 2));
  if (name == "concavity") return concavity(std::max<std::size_t>(trials, 2));
  if (name == "coarsen-calibration") return coarsen_calibration(trials, std::min<std::size_t>(n_max, 12), seed);
  if (name == "jensen-gap") return jensen_gap(trials, seed);
  raise(errc::parameter_out_of_range, "unknown verify suite: " + name);
}

std::vector<std::string> suite_names() {
  return {"strict-properness", "kl-pinsker",          "bregman",
          "l2-weakness",       "concavity",           "coarsen-calibration",
          "jensen-gap"};
}

}  // namespace verify
}  // namespace caliloss
