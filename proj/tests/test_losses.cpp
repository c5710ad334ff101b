// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "caliloss/losses.hpp"

using namespace caliloss;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
bool close(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("catalog contents") {
  const std::vector<local_loss> catalog = builtin_catalog();
  REQUIRE(catalog.size() == 6);
  CHECK(catalog[0].name == "log");
  CHECK(catalog[1].name == "powlog:0.5");
  CHECK(catalog[2].name == "loglog");
  CHECK(catalog[3].name == "sqlog");
  CHECK(catalog[4].name == "linear");
  CHECK(catalog[5].name == "negsqrt");

  // powlog at p = 1 coincides with log.
  const local_loss p1 = make_powlog_loss(1.0);
  const local_loss lg = make_log_loss();
  for (double z : {1.5, 3.0, 100.0, 1e6}) {
    CHECK(close(p1.f(z), lg.f(z), 1e-12));
    CHECK(close(p1.rate_C(z), lg.rate_C(z), 1e-12));
  }
  // loglog C(e) = (1 + 1)/1 = 2.
  CHECK(close(make_loglog_loss().rate_C(std::exp(1.0)), 2.0, 1e-12));
  // sqlog f(1) = ln(e^2)^2 = 4.
  CHECK(close(make_sqlog_loss().f(1.0), 4.0, 1e-12));

  CHECK_THROWS_AS(make_powlog_loss(0.0), error);
  CHECK_THROWS_AS(make_powlog_loss(1.5), error);
  CHECK_THROWS_AS(loss_by_name("nope"), error);
  CHECK(loss_by_name("powlog:0.25").name == "powlog:0.25");
}

TEST_CASE("loss_value") {
  const local_loss lg = make_log_loss();
  const distribution u4 = uniform_distribution(4);
  CHECK(close(loss_value(lg, u4, 0), std::log(4.0), 1e-15));

  std::vector<double> holed{0.0, 0.5, 0.5};
  const distribution q = make_distribution(holed);
  CHECK(loss_value(lg, q, 0) == kInf);

  const local_loss lin = make_linear_loss();
  CHECK(close(loss_value_at(lin, 0.3), -0.3, 1e-15));
  CHECK(loss_value_at(lin, 0.0) == 0.0);  // bounded loss: -q_x -> 0
}

TEST_CASE("expected_loss") {
  const local_loss lg = make_log_loss();
  const distribution u4 = uniform_distribution(4);
  CHECK(close(expected_loss(lg, u4, u4), std::log(4.0), 1e-15));

  // Log-loss gap equals KL.
  const distribution p = make_distribution({0.3, 0.7});
  const distribution q = make_distribution({0.6, 0.4});
  const double gap = expected_loss(lg, q, p) - expected_loss(lg, p, p);
  CHECK(close(gap, kl_divergence(p, q), 1e-12));

  // Linear loss on the worked example: l(p;p) = -5/9, l(u;p) = -1/2.
  const local_loss lin = make_linear_loss();
  const distribution p2 = make_distribution({1.0 / 3.0, 2.0 / 3.0});
  CHECK(close(expected_loss(lin, p2, p2), -5.0 / 9.0, 1e-15));
  CHECK(close(expected_loss(lin, uniform_distribution(2), p2), -0.5, 1e-15));
  CHECK(expected_loss(lin, uniform_distribution(2), p2) >
        expected_loss(lin, p2, p2));

  // 0 * inf = 0: a zero-probability target element with q_x = 0 is harmless.
  std::vector<double> ph{0.0, 1.0};
  std::vector<double> qh{0.0, 1.0};
  CHECK(expected_loss(lg, make_distribution(qh), make_distribution(ph)) == 0.0);
  // Finite at the target whenever the target has full support.
  CHECK(std::isfinite(expected_loss(lg, p, p)));
}

TEST_CASE("empirical_loss") {
  const local_loss lg = make_log_loss();
  const distribution q = make_distribution({0.25, 0.75});
  SUBCASE("concentrated counts") {
    empirical_distribution e;
    e.dom = q.dom();
    e.counts = {5, 0};
    e.m = 5;
    CHECK(close(empirical_loss(lg, q, e), std::log(4.0), 1e-15));
  }
  SUBCASE("exact rational counts reproduce the expected loss") {
    empirical_distribution e;
    e.dom = q.dom();
    e.counts = {1, 3};
    e.m = 4;
    CHECK(close(empirical_loss(lg, q, e),
                expected_loss(lg, q, make_distribution({0.25, 0.75})), 1e-15));
  }
  SUBCASE("sampled hole gives infinity") {
    std::vector<double> holed{0.0, 1.0};
    empirical_distribution e;
    e.dom = q.dom();
    e.counts = {1, 4};
    e.m = 5;
    CHECK(empirical_loss(lg, make_distribution(holed), e) == kInf);
  }
}

TEST_CASE("left strong concavity certificates") {
  reset_loglog_clamp_count();
  for (const local_loss& loss : builtin_catalog()) {
    CAPTURE(loss.name);
    const concavity_report rep =
        check_left_strong_concavity(loss, default_z_grid(loss));
    for (const auto& v : rep.violations) {
      CAPTURE(v.what);
      CAPTURE(v.z);
      CHECK(false);
    }
    CHECK(rep.ok);
    CHECK(rep.worst_slack <= 1e-9);
  }
  CHECK(loglog_clamp_count() == 0);

  SUBCASE("log is tight") {
    const local_loss lg = make_log_loss();
    for (double z : {1.0, 2.0, 10.0, 1e6}) {
      CHECK(close(lg.f2(z), -lg.rate_C(z) / (z * z), 1e-18));
    }
  }
  SUBCASE("sqlog registered rate leaves slack 2 ln z / z^2") {
    const local_loss sq = make_sqlog_loss();
    for (double z : {2.0, 10.0, 1e4}) {
      const double slack = sq.f2(z) + sq.rate_C(z) / (z * z);
      CHECK(close(slack, -2.0 * std::log(z) / (z * z), 1e-15));
      CHECK(slack < 0.0);
    }
  }
}

TEST_CASE("loglog domain handling") {
  const local_loss ll = make_loglog_loss();
  reset_loglog_clamp_count();
  CHECK(close(ll.f(std::exp(1.0)), 0.0, 1e-15));
  CHECK(loglog_clamp_count() == 0);
  CHECK(loss_value_at(ll, 0.0) == kInf);
  // Sub-domain evaluation is continued/clamped and counted.
  const double inside = ll.f(2.0);  // z in (1, e): signed continuation
  CHECK(inside < 0.0);
  CHECK(loglog_clamp_count() == 1);
  (void)ll.f(1.0);
  CHECK(loglog_clamp_count() == 2);
  reset_loglog_clamp_count();
}

TEST_CASE("jensen gap bound") {
  SUBCASE("uniform bucket has zero bound") {
    const distribution p = uniform_distribution(4);
    CHECK(jensen_gap_lower_bound(p, {0, 1}, make_log_loss()) == 0.0);
  }
  SUBCASE("worked example with the log loss") {
    // p = (0.1, 0.3) within a larger vector; bucket {0, 1}.
    const distribution p = make_distribution({0.1, 0.3, 0.6});
    const double bound = jensen_gap_lower_bound(p, {0, 1}, make_log_loss());
    CHECK(close(bound, 0.0078125, 1e-12));
    const double actual = jensen_gap_actual(p, {0, 1}, make_log_loss());
    const double expected_actual =
        std::log(5.0) - (0.25 * std::log(10.0) + 0.75 * std::log(10.0 / 3.0));
    CHECK(close(actual, expected_actual, 1e-12));
    CHECK(actual >= bound);
  }
  SUBCASE("bound scales with the stated homogeneity") {
    // Scaling p(B) with fixed shape: the formula is evaluated as stated.
    const distribution p1 = make_distribution({0.05, 0.15, 0.8});
    const distribution p2 = make_distribution({0.1, 0.3, 0.6});
    const auto b = [](double z) { return 1.0 / (z * z); };
    const double bound1 = jensen_gap_lower_bound(p1, {0, 1}, b);
    const double bound2 = jensen_gap_lower_bound(p2, {0, 1}, b);
    // b(mu)/32 * eps^2/(pB^2 t^2): doubling p on B doubles eps and t and pB,
    // and b(mu) = t^2 here, so the bound scales by (2^2 * 2^2)/(2^2 * 2^2) = 1
    // except for the b factor; evaluate both sides directly instead.
    const double t1 = 0.1, eps1 = 0.1, pb1 = 0.2;
    CHECK(close(bound1, (t1 * t1 / 32.0) * eps1 * eps1 / (pb1 * pb1 * t1 * t1), 1e-15));
    const double t2 = 0.2, eps2 = 0.2, pb2 = 0.4;
    CHECK(close(bound2, (t2 * t2 / 32.0) * eps2 * eps2 / (pb2 * pb2 * t2 * t2), 1e-15));
  }
  SUBCASE("soundness across the catalog") {
    const distribution p = make_distribution({0.05, 0.1, 0.15, 0.2, 0.5});
    for (const local_loss& loss : builtin_catalog()) {
      CAPTURE(loss.name);
      if (loss.z_min > 1.0) continue;  // loglog needs 1/p_x >= e; 0.5 breaks it
      const double bound = jensen_gap_lower_bound(p, {0, 1, 2}, loss);
      const double actual = jensen_gap_actual(p, {0, 1, 2}, loss);
      CHECK(actual >= bound - 1e-12);
    }
    const distribution small = make_distribution({0.05, 0.1, 0.15, 0.2, 0.2, 0.3});
    const local_loss ll = make_loglog_loss();
    CHECK(jensen_gap_actual(small, {0, 1, 2}, ll) >=
          jensen_gap_lower_bound(small, {0, 1, 2}, ll) - 1e-12);
  }
  SUBCASE("zero-mass bucket") {
    std::vector<double> holed{0.0, 1.0};
    CHECK_THROWS_AS(
        jensen_gap_lower_bound(make_distribution(holed), {0}, make_log_loss()),
        error);
  }
}

TEST_CASE("growth envelopes hold at their tight points") {
  const local_loss sq = make_sqlog_loss();
  // (2 + ln z)^2 / sqrt(z) peaks at z = e^2 with value 16/e.
  const double z_star = std::exp(2.0);
  CHECK(close(sq.f(z_star), sq.growth_c * std::sqrt(z_star), 1e-9));
  const local_loss lg = make_log_loss();
  for (double z : {1.0, 4.0, 100.0, 1e8}) {
    CHECK(lg.f(z) <= lg.growth_c * std::sqrt(z) + 1e-12);
  }
}
