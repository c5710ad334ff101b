// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "caliloss/calibrate.hpp"
#include "caliloss/harness.hpp"

using namespace caliloss;

namespace {
bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

distribution zipf(std::size_t n) {
  std::vector<double> raw(n);
  double total = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    raw[x] = 1.0 / static_cast<double>(x + 1);
    total += raw[x];
  }
  for (double& v : raw) v /= total;
  return make_distribution(raw);
}

distribution random_coarsening(const distribution& p, splitmix64& gen,
                               std::size_t blocks) {
  std::vector<std::vector<std::size_t>> partition(blocks);
  for (std::size_t x = 0; x < p.size(); ++x) {
    partition[gen.next_u64() % blocks].push_back(x);
  }
  std::erase_if(partition, [](const auto& b) { return b.empty(); });
  return coarsen(p, partition);
}
}  // namespace

TEST_CASE("estimate_bucket_masses") {
  const distribution p = zipf(16);
  SUBCASE("whole domain estimates exactly one") {
    const empirical_distribution samples = sample(p, 200000, 17);
    std::vector<std::size_t> all(16);
    for (std::size_t x = 0; x < 16; ++x) all[x] = x;
    const std::vector<double> est =
        estimate_bucket_masses(samples, {all}, 0.01, 0.05);
    CHECK(est.size() == 1);
    CHECK(est[0] == 1.0);
  }
  SUBCASE("empty bucket estimates zero") {
    const empirical_distribution samples = sample(p, 200000, 18);
    const std::vector<double> est =
        estimate_bucket_masses(samples, {{}}, 0.01, 0.05);
    CHECK(est[0] == 0.0);
  }
  SUBCASE("sample requirement is the Chernoff count") {
    CHECK(bucket_estimate_sample_requirement(0.01, 0.05) == 110667);
    empirical_distribution tiny = sample(p, 100, 3);
    CHECK_THROWS_AS(estimate_bucket_masses(tiny, {{0, 1}}, 0.01, 0.05), error);
  }
  SUBCASE("estimates land within eps at this sample size") {
    const empirical_distribution samples = sample(p, 110667, 19);
    const std::vector<double> est =
        estimate_bucket_masses(samples, {{0}, {1, 2}}, 0.01, 0.05);
    CHECK(std::abs(est[0] - p.at(0)) <= 0.01);
    CHECK(std::abs(est[1] - (p.at(1) + p.at(2))) <= 0.01);
  }
}

TEST_CASE("construction trace bookkeeping") {
  const distribution p = zipf(1000);
  splitmix64 gen(23);
  const distribution q = random_coarsening(p, gen, 40);
  approx_calibration_params params{0.3, 0.1, 0.1};
  auto [qprime, trace] =
      make_approx_calibrated(q, sampler(p), params, 77, 1e-7);

  CHECK(close(trace.gamma1, 0.1));
  CHECK(close(trace.width, 1.0 - 0.1 / 8.0));
  CHECK(trace.bucket_count == 898);  // ceil(log_{0.9875}(0.1/8000))
  // Explicit Chernoff count ~ 1.52e13; the multiplier scales it down.
  CHECK(std::abs(static_cast<double>(trace.samples_required) - 1.5202478532407e13) <
        1e5);
  CHECK(trace.samples_used ==
        static_cast<std::uint64_t>(std::llround(1e-7 * static_cast<double>(
                                                    trace.samples_required))));
  CHECK(trace.w_norm > 0.8);
  CHECK(trace.w_norm < 1.2);
  // Occupied buckets partition the domain.
  std::size_t members = 0;
  for (const auto& rec : trace.occupied) members += rec.elements;
  CHECK(members == 1000);

  // Output is a valid distribution.
  double total = 0.0;
  for (std::size_t x = 0; x < qprime.size(); ++x) {
    CHECK(qprime.at(x) >= 0.0);
    total += qprime.at(x);
  }
  CHECK(close(total, 1.0, 1e-9));
}

TEST_CASE("bucket count example at N = 1e4") {
  const distribution p = zipf(10000);
  const distribution q = uniform_distribution(10000);
  approx_calibration_params params{0.3, 0.1, 0.1};
  auto [qprime, trace] = make_approx_calibrated(q, sampler(p), params, 5, 1e-9);
  CHECK(trace.bucket_count == 1081);  // ceil(ln(1.25e-6)/ln(0.9875))
  (void)qprime;
}

TEST_CASE("uniform q occupies a single bucket") {
  const distribution p = zipf(200);
  const distribution q = uniform_distribution(200);
  approx_calibration_params params{0.3, 0.2, 0.1};
  auto [qprime, trace] = make_approx_calibrated(q, sampler(p), params, 9, 1e-7);
  CHECK(trace.occupied.size() == 1);
  CHECK_FALSE(trace.occupied[0].low_mass);  // it holds all the mass
  // One bucket, piecewise-uniform weights: the output is uniform again.
  for (std::size_t x = 0; x < 200; ++x) CHECK(close(qprime.at(x), 1.0 / 200.0, 1e-12));
}

TEST_CASE("is_approx_calibrated certifier") {
  SUBCASE("exactly calibrated passes any parameters") {
    const distribution p = make_distribution({0.1, 0.3, 0.2, 0.4});
    const distribution q = coarsen(p, {{0, 1}, {2, 3}});
    for (double a : {0.01, 0.1, 0.5}) {
      approx_calibration_params params{a, a, 0.1};
      CHECK(is_approx_calibrated(q, p, params).passes);
    }
  }
  SUBCASE("overweighted level of q-mass 2*alpha2 fails the witness budget") {
    const distribution p = make_distribution({0.01, 0.19, 0.4, 0.4});
    const distribution q = make_distribution({0.2, 0.2, 0.3, 0.3});
    approx_calibration_params params{0.3, 0.2, 0.1};
    const approx_calibration_report rep = is_approx_calibrated(q, p, params);
    CHECK(rep.lower_bound_ok);
    CHECK_FALSE(rep.witness_mass_ok);
    CHECK(close(rep.witness_mass, 0.4));
    CHECK_FALSE(rep.passes);
  }
  SUBCASE("underweighted level fails the lower bound") {
    const distribution p = make_distribution({0.5, 0.5});
    const distribution q = make_distribution({0.3, 0.7});
    approx_calibration_params params{0.3, 0.5, 0.1};
    const approx_calibration_report rep = is_approx_calibrated(q, p, params);
    CHECK_FALSE(rep.lower_bound_ok);
    CHECK_FALSE(rep.passes);
  }
  SUBCASE("certified output obeys the probability lower bound") {
    const distribution p = zipf(300);
    splitmix64 gen(31);
    const distribution q = random_coarsening(p, gen, 12);
    approx_calibration_params params{0.3, 0.1, 0.1};
    auto [qprime, trace] = make_approx_calibrated(q, sampler(p), params, 41, 1e-7);
    const approx_calibration_report rep = is_approx_calibrated(qprime, p, params);
    if (rep.passes) {
      // q'_x >= (1 - alpha1) p_x / N on the support of p.
      const double floor_ratio = (1.0 - params.alpha1) / 300.0;
      CHECK(min_mass_ratio(qprime, p) >= floor_ratio - 1e-12);
    }
    (void)trace;
  }
}

TEST_CASE("certification rate over seeded trials") {
  const std::size_t runs = 40;
  const distribution p = zipf(100);
  std::size_t failures = 0;
  std::vector<double> distances;
  for (std::size_t r = 0; r < runs; ++r) {
    splitmix64 gen(derive_stream(4242, r));
    const distribution q = random_coarsening(p, gen, 8);
    approx_calibration_params params{0.3, 0.1, 0.1};
    auto [qprime, trace] =
        make_approx_calibrated(q, sampler(p), params, derive_stream(991, r), 1e-7);
    if (!is_approx_calibrated(qprime, p, params).passes) ++failures;
    distances.push_back(l1_distance(q, qprime));
    (void)trace;
  }
  // delta = 0.1 plus binomial slack at this run count.
  const double slack = 0.1 + 3.0 * std::sqrt(0.1 / static_cast<double>(runs));
  CHECK(static_cast<double>(failures) / static_cast<double>(runs) <= slack);
  std::sort(distances.begin(), distances.end());
  // Already-calibrated inputs stay within O(alpha1 + alpha2).
  CHECK(distances[runs / 2] <= 5.0 * (0.3 + 0.1));
}

TEST_CASE("stability: distance shrinks as the tolerances shrink") {
  const distribution p = zipf(100);
  splitmix64 gen(77);
  const distribution q = random_coarsening(p, gen, 8);
  double prev_median = 2.0;
  // The Chernoff count scales like b^2/(alpha1^2 alpha2^2); pick per-alpha
  // multipliers that keep the drawn samples near 3e5 per run.
  const std::pair<double, double> settings[] = {
      {0.6, 1e-6}, {0.3, 3e-8}, {0.12, 1e-10}};
  for (const auto& [a, multiplier] : settings) {
    std::vector<double> distances;
    for (std::size_t r = 0; r < 15; ++r) {
      approx_calibration_params params{a, a / 3.0, 0.1};
      auto [qprime, trace] = make_approx_calibrated(
          q, sampler(p), params, derive_stream(5150 + static_cast<int>(a * 100), r),
          multiplier);
      distances.push_back(l1_distance(q, qprime));
      (void)trace;
    }
    std::sort(distances.begin(), distances.end());
    const double median = distances[distances.size() / 2];
    CHECK(median <= prev_median + 1e-9);
    prev_median = median;
  }
}

TEST_CASE("parameter validation") {
  const distribution p = zipf(10);
  const distribution q = uniform_distribution(10);
  CHECK_THROWS_AS(make_approx_calibrated(q, sampler(p), {0.0, 0.1, 0.1}, 1, 1.0),
                  error);
  CHECK_THROWS_AS(make_approx_calibrated(q, sampler(p), {0.1, 0.0, 0.1}, 1, 1.0),
                  error);
  CHECK_THROWS_AS(make_approx_calibrated(q, sampler(p), {0.1, 0.1, 1.0}, 1, 1.0),
                  error);
  CHECK_THROWS_AS(make_approx_calibrated(q, sampler(p), {0.1, 0.1, 0.1}, 1, 0.0),
                  error);
  CHECK_THROWS_AS(
      make_approx_calibrated(uniform_distribution(9), sampler(p), {0.1, 0.1, 0.1}, 1, 1e-7),
      error);
}
