// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "caliloss/distribution.hpp"

namespace caliloss {

/// A local loss l(q, x) = f(1/q_x) bundled with the analytic metadata the
/// theorem bounds consume:
///   - f, f1, f2 on [z_min, infinity)
///   - growth envelope f(z) <= growth_c * z^growth_r for z >= 1
///   - rate_C: f is (C(z)/z^2)-left-strongly concave, C non-increasing
///   - deriv_D: non-decreasing D with f1(z) <= D(z)/z
///   - f_of_ln: evaluates f(exp(L)); beta ~ N^8/delta overflows doubles, so
///     every bound works from ln(beta) through this composition.
struct local_loss {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> f1;
  std::function<double(double)> f2;
  std::function<double(double)> rate_C;
  std::function<double(double)> deriv_D;
  std::function<double(double)> f_of_ln;
  double growth_c = 1.0;
  double growth_r = 0.5;
  double z_min = 1.0;      // lower edge of f's domain (e for loglog)
  double deriv_z_min = 1.0;  // the D envelope is claimed for z >= this
  bool strictly_concave = true;
  bool nonnegative = true;  // f >= 0 on [z_min, inf); the sample bounds need it
  double value_at_zero_q = 0.0;  // lim f(z), z -> inf; +inf when unbounded

  // Asymptotic rate summaries carried as metadata for report output.
  std::string strong_properness_template;
  std::string concentration_template;
  std::string sample_properness_template;
};

/// The six built-in families; the power-log entry is instantiated at
/// p = 0.5. Addressable by name: "log", "powlog:<p>", "loglog", "sqlog",
/// "linear", "negsqrt".
std::vector<local_loss> builtin_catalog();

local_loss loss_by_name(const std::string& name);

local_loss make_log_loss();
local_loss make_powlog_loss(double p);  // p in (0, 1]
local_loss make_loglog_loss();
local_loss make_sqlog_loss();
local_loss make_linear_loss();
local_loss make_negsqrt_loss();

/// Number of times a loglog evaluation fell outside [e, inf) and was
/// continued/clamped. The experiments keep q_x <= 1/e, so tests pin this
/// at zero.
std::uint64_t loglog_clamp_count();
void reset_loglog_clamp_count();

/// f(1/q_x); +infinity when q_x = 0 and f is unbounded.
double loss_value(const local_loss& loss, const distribution& q, std::size_t x);
double loss_value_at(const local_loss& loss, double qx);

/// E_{X~p}[l(q, X)] with the 0 * inf = 0 convention on zero-mass elements.
double expected_loss(const local_loss& loss, const distribution& q,
                     const distribution& p);

/// (1/m) sum counts_x * l(q, x).
double empirical_loss(const local_loss& loss, const distribution& q,
                      const empirical_distribution& phat);

struct concavity_violation {
  double z = 0.0;
  double slack = 0.0;
  std::string what;
};

struct concavity_report {
  bool ok = true;
  std::size_t points = 0;
  // max over the grid of (f2(z) + C(z)/z^2) / max(1, C(z)/z^2); the
  // normalization keeps the certificate meaningful where the curvature
  // blows up (powlog near z = 1).
  double worst_slack = 0.0;
  std::vector<concavity_violation> violations;
};

std::vector<double> default_z_grid(const local_loss& loss,
                                   std::size_t points = 400,
                                   double z_max = 1e9);

/// Grid certificate for the loss metadata: f2(z) <= -C(z)/z^2 (within
/// 1e-9), f non-decreasing and concave, C non-increasing and non-negative,
/// the growth and derivative envelopes, and convexity of q -> f(1/q) on
/// the mapped grid (the inverse-concavity direction).
concavity_report check_left_strong_concavity(const local_loss& loss,
                                             const std::vector<double>& z_grid);

/// (b(mu)/32) * eps^2 / (p(B)^2 t(B)^2) with t(B) = p(B)/|B|, mu = 1/t and
/// eps = sum over B of |p_x - t(B)|; a certified lower bound on the Jensen
/// gap f(mu) - E[f(1/p_X) | X in B] when f is b(z)-left-strongly concave.
double jensen_gap_lower_bound(const distribution& p,
                              const std::vector<std::size_t>& bucket,
                              const std::function<double(double)>& rate_b);
double jensen_gap_lower_bound(const distribution& p,
                              const std::vector<std::size_t>& bucket,
                              const local_loss& loss);

/// The gap itself, f(mu) - E[f(1/p_X) | X in B]; test oracle for the bound.
double jensen_gap_actual(const distribution& p,
                         const std::vector<std::size_t>& bucket,
                         const local_loss& loss);

}  // namespace caliloss
