// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#include "caliloss/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace caliloss {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}
}  // namespace

void parallel_for_trials(std::size_t trials, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));
  if (threads <= 1 || trials < 2) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t t = w; t < trials; t += threads) body(t);
    });
  }
  for (auto& th : pool) th.join();
}

summary_stats summarize(const std::vector<double>& values,
                        const std::vector<std::uint8_t>& failures) {
  summary_stats s;
  s.trials = values.size();
  if (values.empty()) return s;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(sorted.size());
  s.median = quantile_sorted(sorted, 0.5);
  s.q05 = quantile_sorted(sorted, 0.05);
  s.q95 = quantile_sorted(sorted, 0.95);
  s.min = sorted.front();
  s.max = sorted.back();
  if (!failures.empty()) {
    std::size_t bad = 0;
    for (std::uint8_t f : failures) bad += f != 0;
    s.failure_rate = static_cast<double>(bad) / static_cast<double>(failures.size());
  }
  return s;
}

experiment_result run_concentration(const local_loss& loss, const distribution& p,
                                    const distribution& q, std::uint64_t m,
                                    std::size_t trials, double gamma,
                                    std::uint64_t seed, unsigned threads) {
  if (!p.same_domain(q)) raise(errc::domain_mismatch, "p and q have different domains");
  if (m == 0 || trials == 0) raise(errc::parameter_out_of_range, "m and trials must be >= 1");
  experiment_result result;
  result.kind = "concentration";
  result.seed = seed;
  result.config = {{"N", static_cast<double>(p.size())},
                   {"m", static_cast<double>(m)},
                   {"trials", static_cast<double>(trials)},
                   {"gamma", gamma}};
  const double true_loss = expected_loss(loss, q, p);
  result.stats["true_loss"] = true_loss;
  result.stats["true_loss_infinite"] = true_loss == kInf ? 1.0 : 0.0;

  const sampler src(p);
  result.per_trial.assign(trials, 0.0);
  result.per_trial_flag.assign(trials, 0);
  parallel_for_trials(trials, threads, [&](std::size_t t) {
    splitmix64 gen(derive_stream(seed, t));
    double acc = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
      const double v = loss_value(loss, q, src.draw(gen));
      if (v == kInf) {
        acc = kInf;
        break;
      }
      acc += v;
    }
    const double emp = acc == kInf ? kInf : acc / static_cast<double>(m);
    const double dev = std::abs(emp - true_loss);  // inf - inf is NaN; flag below
    result.per_trial[t] = (emp == kInf && true_loss == kInf) ? 0.0 : dev;
    result.per_trial_flag[t] = result.per_trial[t] >= gamma ? 1 : 0;
  });
  result.summary = summarize(result.per_trial, result.per_trial_flag);
  return result;
}

experiment_result run_sample_properness(const local_loss& loss,
                                        const distribution& p,
                                        const distribution& q, std::uint64_t m,
                                        std::size_t trials, std::uint64_t seed,
                                        unsigned threads) {
  if (!p.same_domain(q)) raise(errc::domain_mismatch, "p and q have different domains");
  if (m == 0 || trials == 0) raise(errc::parameter_out_of_range, "m and trials must be >= 1");
  experiment_result result;
  result.kind = "sample-properness";
  result.seed = seed;
  result.config = {{"N", static_cast<double>(p.size())},
                   {"m", static_cast<double>(m)},
                   {"trials", static_cast<double>(trials)}};
  const sampler src(p);
  result.per_trial.assign(trials, 0.0);
  result.per_trial_flag.assign(trials, 0);
  std::vector<std::uint8_t> ties(trials, 0);
  parallel_for_trials(trials, threads, [&](std::size_t t) {
    splitmix64 gen(derive_stream(seed, t));
    double acc_q = 0.0, acc_p = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
      const std::size_t x = src.draw(gen);
      const double vq = loss_value(loss, q, x);
      const double vp = loss_value(loss, p, x);
      acc_q = (acc_q == kInf || vq == kInf) ? kInf : acc_q + vq;
      acc_p = (acc_p == kInf || vp == kInf) ? kInf : acc_p + vp;
    }
    const double lq = acc_q == kInf ? kInf : acc_q / static_cast<double>(m);
    const double lp = acc_p == kInf ? kInf : acc_p / static_cast<double>(m);
    double diff;
    if (lq == kInf && lp == kInf) {
      diff = 0.0;
    } else if (lq == kInf) {
      diff = kInf;
    } else if (lp == kInf) {
      diff = -kInf;
    } else {
      diff = lq - lp;
    }
    result.per_trial[t] = diff;
    result.per_trial_flag[t] = diff > 0.0 ? 1 : 0;  // target strictly wins
    ties[t] = diff == 0.0 ? 1 : 0;
  });
  result.summary = summarize(result.per_trial, {});
  std::size_t wins = 0, tie_count = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    wins += result.per_trial_flag[t];
    tie_count += ties[t];
  }
  result.stats["success_fraction"] = static_cast<double>(wins) / static_cast<double>(trials);
  result.stats["tie_fraction"] = static_cast<double>(tie_count) / static_cast<double>(trials);
  return result;
}

experiment_result demo_logloss_nonconcentration(std::size_t n, std::uint64_t m,
                                                std::size_t trials,
                                                std::uint64_t seed,
                                                unsigned threads) {
  if (n < 2) raise(errc::parameter_out_of_range, "need N >= 2");
  if (m > n / 10 && m != 1) {  // m = 1 is the single-Bernoulli edge case
    raise(errc::parameter_out_of_range, "demo requires m <= N/10 (m must be far below N)");
  }
  experiment_result result;
  result.kind = "logloss-nonconcentration";
  result.seed = seed;
  result.config = {{"N", static_cast<double>(n)},
                   {"m", static_cast<double>(m)},
                   {"trials", static_cast<double>(trials)}};

  const distribution p = uniform_distribution(n);
  std::vector<double> qv(n, 1.0 / static_cast<double>(n - 1));
  qv[0] = 0.0;
  const distribution q = make_distribution(std::move(qv));
  const local_loss log_loss = make_log_loss();
  result.stats["true_loss_infinite"] = 1.0;

  const sampler src(p);
  result.per_trial.assign(trials, 0.0);
  result.per_trial_flag.assign(trials, 0);
  parallel_for_trials(trials, threads, [&](std::size_t t) {
    const empirical_distribution phat =
        src.draw_counts(m, derive_stream(seed, t));
    const double emp = empirical_loss(log_loss, q, phat);
    result.per_trial[t] = emp;
    result.per_trial_flag[t] = emp != kInf ? 1 : 0;  // finite empirical loss
  });
  std::size_t finite = 0;
  for (std::uint8_t f : result.per_trial_flag) finite += f;
  result.summary = summarize(result.per_trial, {});
  result.stats["finite_fraction"] =
      static_cast<double>(finite) / static_cast<double>(trials);
  result.stats["expected_fraction"] =
      std::pow(1.0 - 1.0 / static_cast<double>(n), static_cast<double>(m));
  return result;
}

void linear_improperness_construction(std::size_t n, std::uint64_t m,
                                      distribution* p_out, distribution* q_out) {
  if (n < 8 || n % 2 != 0) {
    raise(errc::invalid_shape, "construction needs even N >= 8");
  }
  if (m < 16) {
    raise(errc::invalid_shape, "construction needs m >= 16 so that 1/4 - 1/sqrt(m) >= 0");
  }
  const double bump = 1.0 / std::sqrt(static_cast<double>(m));
  const std::size_t half = n / 2;
  std::vector<double> p(n, 0.0), q(n, 0.0);
  p[0] = 0.25 + bump;
  p[1] = 0.25 - bump;
  for (std::size_t x = 2; x < half; ++x) {
    p[x] = 0.5 / static_cast<double>(half - 2);
  }
  q[0] = q[1] = 0.25;
  for (std::size_t x = 2; x < n; ++x) {
    q[x] = 0.5 / static_cast<double>(n - 2);
  }
  *p_out = make_distribution(std::move(p));
  *q_out = make_distribution(std::move(q));
}

experiment_result demo_linear_loss_improperness(std::size_t n, std::uint64_t m,
                                                std::size_t trials,
                                                std::uint64_t seed,
                                                unsigned threads) {
  if (m > n / 10) {
    raise(errc::parameter_out_of_range, "demo requires m <= N/10");
  }
  distribution p, q;
  linear_improperness_construction(n, m, &p, &q);

  experiment_result result;
  result.kind = "linear-improperness";
  result.seed = seed;
  result.config = {{"N", static_cast<double>(n)},
                   {"m", static_cast<double>(m)},
                   {"trials", static_cast<double>(trials)}};
  const calibration_report cal = is_calibrated(q, p, 1e-12);
  result.stats["construction_calibrated"] = cal.calibrated ? 1.0 : 0.0;
  result.stats["construction_max_discrepancy"] = cal.max_discrepancy;
  result.stats["l1_distance"] = l1_distance(p, q);
  result.stats["level_count"] = static_cast<double>(cal.levels.size());

  const local_loss lin = make_linear_loss();
  const sampler src(p);
  result.per_trial.assign(trials, 0.0);
  result.per_trial_flag.assign(trials, 0);
  parallel_for_trials(trials, threads, [&](std::size_t t) {
    const empirical_distribution phat =
        src.draw_counts(m, derive_stream(seed, t));
    const double diff = empirical_loss(lin, q, phat) - empirical_loss(lin, p, phat);
    result.per_trial[t] = diff;
    result.per_trial_flag[t] = diff < 0.0 ? 1 : 0;  // q beats the target
  });
  std::size_t reversals = 0;
  for (std::uint8_t f : result.per_trial_flag) reversals += f;
  result.summary = summarize(result.per_trial, {});
  result.stats["reversal_fraction"] =
      static_cast<double>(reversals) / static_cast<double>(trials);
  return result;
}

distribution random_rational_distribution(std::size_t n, splitmix64& gen,
                                          const rational_p_options& opts) {
  if (n == 0) raise(errc::parameter_out_of_range, "need n >= 1");
  const std::size_t denom = opts.denominator;
  if (denom < n) raise(errc::parameter_out_of_range, "denominator below domain size");
  std::vector<double> raw(n);
  double total = 0.0;
  for (double& v : raw) {
    v = gen.next_exponential();
    total += v;
  }
  for (double& v : raw) v /= total;

  if (opts.max_prob < 1.0 && n >= 2) {
    const double margin = 2.0 / static_cast<double>(denom);
    const double target = opts.max_prob - margin;
    const double uniform = 1.0 / static_cast<double>(n);
    if (target <= uniform) {
      raise(errc::parameter_out_of_range,
            "max_prob unreachable: below 1/n for this domain size");
    }
    const double peak = *std::max_element(raw.begin(), raw.end());
    if (peak > target) {
      const double lambda = (peak - target) / (peak - uniform);
      for (double& v : raw) v = (1.0 - lambda) * v + lambda * uniform;
    }
  }

  // Largest-remainder rounding to numerators over the common denominator.
  std::vector<std::uint64_t> numer(n);
  std::vector<double> frac(n);
  std::uint64_t assigned = 0;
  const double d = static_cast<double>(denom);
  for (std::size_t x = 0; x < n; ++x) {
    double scaled = raw[x] * d;
    std::uint64_t base = static_cast<std::uint64_t>(std::floor(scaled));
    if (opts.full_support && base == 0) {
      base = 1;
      scaled = 1.0;
    }
    numer[x] = base;
    frac[x] = scaled - static_cast<double>(base);
    assigned += base;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  std::size_t cursor = 0;
  while (assigned < denom) {
    numer[order[cursor % n]] += 1;
    ++assigned;
    ++cursor;
  }
  while (assigned > denom) {
    std::size_t idx = order[n - 1 - (cursor % n)];
    if (numer[idx] > (opts.full_support ? 1ULL : 0ULL)) {
      numer[idx] -= 1;
      --assigned;
    }
    ++cursor;
  }
  std::vector<double> probs(n);
  for (std::size_t x = 0; x < n; ++x) {
    probs[x] = static_cast<double>(numer[x]) / d;
  }
  return make_distribution(std::move(probs));
}

experiment_result sweep_strong_properness(const local_loss& loss,
                                          std::size_t n_max, std::size_t trials_p,
                                          std::uint64_t seed, unsigned threads) {
  if (n_max < 2 || n_max > 8) {
    raise(errc::parameter_out_of_range, "sweep supports 2 <= N <= 8");
  }
  experiment_result result;
  result.kind = "strong-properness-sweep";
  result.seed = seed;
  result.config = {{"N_max", static_cast<double>(n_max)},
                   {"trials", static_cast<double>(trials_p)}};

  const bool needs_small_probs = loss.z_min > 1.0;  // loglog: q_x <= 1/e
  const std::size_t n_min = needs_small_probs ? 4 : 2;
  rational_p_options opts;
  if (needs_small_probs) opts.max_prob = 1.0 / loss.z_min;

  result.per_trial.assign(trials_p, 0.0);
  result.per_trial_flag.assign(trials_p, 0);
  parallel_for_trials(trials_p, threads, [&](std::size_t t) {
    splitmix64 gen(derive_stream(seed, t));
    const std::size_t n =
        n_min + static_cast<std::size_t>(gen.next_u64() % (n_max - n_min + 1));
    const distribution p = random_rational_distribution(n, gen, opts);
    const double lpp = expected_loss(loss, p, p);
    double min_slack = kInf;
    for (const distribution& q : enumerate_calibrated(p)) {
      const double eps = l1_distance(p, q);
      if (eps == 0.0) continue;
      const double gap = expected_loss(loss, q, p) - lpp;
      const double bound = strong_properness_gap_bound(loss, p.size(), eps);
      min_slack = std::min(min_slack, gap - bound);
    }
    result.per_trial[t] = min_slack;  // +inf when only q = p exists
    result.per_trial_flag[t] = min_slack < -1e-9 ? 1 : 0;
  });
  result.summary = summarize(result.per_trial, result.per_trial_flag);
  std::size_t violations = 0;
  for (std::uint8_t f : result.per_trial_flag) violations += f;
  result.stats["violations"] = static_cast<double>(violations);
  return result;
}

}  // namespace caliloss
