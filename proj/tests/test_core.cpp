// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "caliloss/distribution.hpp"
#include "caliloss/io.hpp"

using namespace caliloss;

namespace {

bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("validate_distribution accepts and rejects") {
  CHECK_NOTHROW(make_distribution({0.25, 0.25, 0.25, 0.25}));
  CHECK_NOTHROW(make_distribution({1.0 / 3.0, 2.0 / 3.0}));

  CHECK_THROWS_WITH_AS(make_distribution({0.5, 0.6}), doctest::Contains("1.1"),
                       error);
  try {
    make_distribution({0.5, 0.6});
  } catch (const error& e) {
    CHECK(e.code() == errc::sum_out_of_tolerance);
  }
  CHECK_THROWS_AS(make_distribution({-0.1, 1.1}), error);
  CHECK_THROWS_AS(make_distribution({0.5, 0.5, 0.5}), error);
  // No renormalization: values are stored as given.
  const distribution d = make_distribution({0.2, 0.8});
  CHECK(d.at(0) == 0.2);
  CHECK(d.at(1) == 0.8);

  domain dup;
  dup.size = 2;
  dup.labels = {"a", "a"};
  CHECK_THROWS_AS(validate_distribution({0.5, 0.5}, dup), error);
}

TEST_CASE("level_sets groups by value") {
  SUBCASE("uniform collapses to one level") {
    const level_set_partition part = level_sets(uniform_distribution(4));
    REQUIRE(part.levels.size() == 1);
    CHECK(part.levels[0].value == 0.25);
    CHECK(part.levels[0].indices.size() == 4);
  }
  SUBCASE("two level sets") {
    const level_set_partition part =
        level_sets(make_distribution({0.2, 0.2, 0.3, 0.3}));
    REQUIRE(part.levels.size() == 2);
    CHECK(part.levels[0].value == 0.2);
    CHECK(part.levels[0].indices == std::vector<std::size_t>{0, 1});
    CHECK(part.levels[1].indices == std::vector<std::size_t>{2, 3});
  }
  SUBCASE("distinct values stay separate") {
    const level_set_partition part =
        level_sets(make_distribution({1.0 / 3.0, 2.0 / 3.0}));
    CHECK(part.levels.size() == 2);
  }
}

TEST_CASE("is_calibrated") {
  const distribution p = make_distribution({1.0 / 3.0, 2.0 / 3.0});
  SUBCASE("self-calibration") {
    CHECK(is_calibrated(p, p, 1e-12).calibrated);
  }
  SUBCASE("uniform is calibrated against anything") {
    const distribution u = uniform_distribution(2);
    CHECK(is_calibrated(u, p, 1e-12).calibrated);
    const distribution p4 = make_distribution({0.1, 0.2, 0.3, 0.4});
    CHECK(is_calibrated(uniform_distribution(4), p4, 1e-12).calibrated);
  }
  SUBCASE("point mass is not calibrated against (1/3, 2/3)") {
    const distribution q = make_distribution({0.0, 1.0});
    const calibration_report rep = is_calibrated(q, p, 1e-12);
    CHECK_FALSE(rep.calibrated);
    CHECK(rep.max_discrepancy > 0.3);
  }
  SUBCASE("domain mismatch") {
    CHECK_THROWS_AS(is_calibrated(uniform_distribution(3), p, 1e-9), error);
  }
}

TEST_CASE("coarsen") {
  const distribution p = make_distribution({0.1, 0.3, 0.2, 0.4});
  SUBCASE("block averages") {
    const distribution q = coarsen(p, {{0, 1}, {2, 3}});
    CHECK(close(q.at(0), 0.2));
    CHECK(close(q.at(1), 0.2));
    CHECK(close(q.at(2), 0.3));
    CHECK(close(q.at(3), 0.3));
  }
  SUBCASE("singleton partition is the identity") {
    const distribution q = coarsen(p, {{0}, {1}, {2}, {3}});
    for (std::size_t x = 0; x < 4; ++x) CHECK(q.at(x) == p.at(x));
  }
  SUBCASE("single block gives uniform") {
    const distribution p2 = make_distribution({1.0 / 3.0, 2.0 / 3.0});
    const distribution q = coarsen(p2, {{0, 1}});
    CHECK(close(q.at(0), 0.5));
    CHECK(close(q.at(1), 0.5));
  }
  SUBCASE("bad partitions") {
    CHECK_THROWS_AS(coarsen(p, {{0, 1}, {1, 2, 3}}), error);
    CHECK_THROWS_AS(coarsen(p, {{0, 1}}), error);
    CHECK_THROWS_AS(coarsen(p, {{0, 1}, {2, 3}, {}}), error);
  }
}

TEST_CASE("enumerate_calibrated") {
  SUBCASE("example target (1/3, 2/3)") {
    const distribution p = make_distribution({1.0 / 3.0, 2.0 / 3.0});
    const std::vector<distribution> cal = enumerate_calibrated(p);
    REQUIRE(cal.size() == 2);
    CHECK(close(cal[0].at(0), 1.0 / 3.0));
    CHECK(close(cal[1].at(0), 0.5));
  }
  SUBCASE("singleton domain") {
    const std::vector<distribution> cal =
        enumerate_calibrated(make_distribution({1.0}));
    REQUIRE(cal.size() == 1);
    CHECK(cal[0].at(0) == 1.0);
  }
  SUBCASE("uniform target deduplicates to itself") {
    const std::vector<distribution> cal =
        enumerate_calibrated(uniform_distribution(3));
    REQUIRE(cal.size() == 1);
    CHECK(close(cal[0].at(0), 1.0 / 3.0));
  }
  SUBCASE("contains the target and the uniform distribution") {
    const distribution p = make_distribution({0.1, 0.3, 0.2, 0.4});
    bool has_p = false, has_u = false;
    for (const distribution& q : enumerate_calibrated(p)) {
      if (close(l1_distance(q, p), 0.0)) has_p = true;
      if (close(l1_distance(q, uniform_distribution(4)), 0.0)) has_u = true;
    }
    CHECK(has_p);
    CHECK(has_u);
  }
  SUBCASE("cap on the domain size") {
    CHECK_THROWS_AS(enumerate_calibrated(uniform_distribution(13)), error);
  }
  SUBCASE("partition count matches the Bell numbers") {
    std::size_t count = 0;
    for_each_set_partition(5, [&](const auto&) { ++count; });
    CHECK(count == 52);
    count = 0;
    for_each_set_partition(8, [&](const auto&) { ++count; });
    CHECK(count == 4140);
  }
}

TEST_CASE("distances") {
  const distribution p = make_distribution({0.5, 0.5});
  const distribution q = make_distribution({0.25, 0.75});
  CHECK(close(l1_distance(p, q), 0.5));
  CHECK(close(tv_distance(p, q), 0.25));
  CHECK(kl_divergence(p, p) == 0.0);
  // KL((1/2,1/2), (1/4,3/4)) = (ln 2)/2 + (1/2) ln(2/3)
  const double expected = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
  CHECK(close(kl_divergence(p, q), expected, 1e-15));
  CHECK(close(expected, 0.14384103622589045, 1e-15));

  // q missing an element of supp(p) gives infinite KL.
  const distribution u = uniform_distribution(3);
  std::vector<double> holed{0.0, 0.5, 0.5};
  CHECK(kl_divergence(u, make_distribution(holed)) ==
        std::numeric_limits<double>::infinity());
  // 0 ln(0/q) = 0: support gaps in p are fine.
  CHECK(std::isfinite(kl_divergence(make_distribution(holed), u)));
}

TEST_CASE("tv equals half l1 and stays in [0,1] on random pairs") {
  splitmix64 gen(11);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + gen.next_u64() % 10;
    std::vector<double> a(n), b(n);
    double sa = 0.0, sb = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      a[x] = gen.next_exponential();
      b[x] = gen.next_exponential();
      sa += a[x];
      sb += b[x];
    }
    for (std::size_t x = 0; x < n; ++x) {
      a[x] /= sa;
      b[x] /= sb;
    }
    const distribution p = make_distribution(a);
    const distribution q = make_distribution(b);
    const double tv = tv_distance(p, q);
    CHECK(close(tv, 0.5 * l1_distance(p, q), 1e-15));
    CHECK(tv >= 0.0);
    CHECK(tv <= 1.0 + 1e-12);
    CHECK(kl_divergence(p, q) >= -1e-15);
  }
}

TEST_CASE("sampling") {
  SUBCASE("point mass concentrates all counts") {
    const empirical_distribution e = sample(point_mass(5, 3), 100, 42);
    CHECK(e.counts[3] == 100);
    CHECK(e.m == 100);
  }
  SUBCASE("deterministic given the seed") {
    const distribution p = make_distribution({0.1, 0.3, 0.2, 0.4});
    const empirical_distribution a = sample(p, 1000, 7);
    const empirical_distribution b = sample(p, 1000, 7);
    CHECK(a.counts == b.counts);
    const empirical_distribution c = sample(p, 1000, 8);
    CHECK(a.counts != c.counts);
  }
  SUBCASE("binomial tail: uniform counts stay within 5 sigma") {
    const std::uint64_t m = 100000;
    const empirical_distribution e = sample(uniform_distribution(2), m, 123);
    const double sigma = std::sqrt(0.25 * static_cast<double>(m));
    CHECK(std::abs(static_cast<double>(e.counts[0]) - 50000.0) < 5.0 * sigma);
  }
  SUBCASE("empirical to distribution") {
    const empirical_distribution e = sample(uniform_distribution(4), 400, 3);
    const distribution d = e.to_distribution();
    double sum = 0.0;
    for (std::size_t x = 0; x < 4; ++x) sum += d.at(x);
    CHECK(close(sum, 1.0));
  }
}

TEST_CASE("conditional_inverse_mean") {
  const distribution p = make_distribution({0.1, 0.3, 0.2, 0.4});
  // |B|/p(B) = 2/0.4 = 5 = 1/t with t = 0.2.
  CHECK(close(conditional_inverse_mean(p, {0, 1}), 5.0));
  CHECK(close(conditional_inverse_mean(p, {2}), 1.0 / 0.2));
  CHECK(close(conditional_inverse_mean(uniform_distribution(6), {1, 3, 5}), 6.0));
  CHECK_THROWS_AS(conditional_inverse_mean(make_distribution({0.0, 1.0}), {0}),
                  error);
}

TEST_CASE("min_mass_ratio") {
  const distribution p = make_distribution({0.1, 0.3, 0.2, 0.4});
  const distribution q = make_distribution({0.2, 0.2, 0.3, 0.3});
  CHECK(close(min_mass_ratio(q, p), 2.0 / 3.0));
  CHECK(min_mass_ratio(q, p) >= 0.25 - 1e-12);
  CHECK(close(min_mass_ratio(p, p), 1.0));
  // Tight case: uniform candidate, point-mass target.
  CHECK(close(min_mass_ratio(uniform_distribution(8), point_mass(8, 0)), 0.125));
}

TEST_CASE("coarsening calibration property") {
  splitmix64 gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen.next_u64() % 9;
    std::vector<double> raw(n);
    double total = 0.0;
    for (double& v : raw) {
      v = gen.next_exponential();
      total += v;
    }
    for (double& v : raw) v /= total;
    const distribution p = make_distribution(raw);
    const std::size_t k = 1 + gen.next_u64() % n;
    std::vector<std::vector<std::size_t>> blocks(k);
    for (std::size_t x = 0; x < n; ++x) blocks[gen.next_u64() % k].push_back(x);
    std::erase_if(blocks, [](const auto& b) { return b.empty(); });
    const distribution q = coarsen(p, blocks);
    CHECK(is_calibrated(q, p, 1e-12, 1e-12).calibrated);
  }
}

TEST_CASE("distribution file round trip") {
  const std::string json_path = "test_dist.json";
  const std::string tsv_path = "test_dist.tsv";
  domain dom;
  dom.size = 3;
  dom.labels = {"a", "b", "c"};
  const distribution d =
      validate_distribution({0.25, 0.5, 0.25}, dom);
  write_distribution_json(d, json_path);
  write_distribution_tsv(d, tsv_path);
  const distribution dj = read_distribution(json_path);
  const distribution dt = read_distribution(tsv_path);
  for (std::size_t x = 0; x < 3; ++x) {
    CHECK(dj.at(x) == d.at(x));
    CHECK(dt.at(x) == d.at(x));
  }
  CHECK(dj.dom().labels == dom.labels);
  CHECK(dt.dom().labels == dom.labels);
  // Reader validates: a non-normalized file is rejected.
  {
    std::ofstream bad("test_dist_bad.tsv");
    bad << "a\t0.9\nb\t0.9\n";
  }
  CHECK_THROWS_AS(read_distribution("test_dist_bad.tsv"), error);
  std::remove(json_path.c_str());
  std::remove(tsv_path.c_str());
  std::remove("test_dist_bad.tsv");
}
