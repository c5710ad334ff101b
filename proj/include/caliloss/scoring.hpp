// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "caliloss/distribution.hpp"

namespace caliloss {

/// A concave expected-loss generator H with a supergradient dH. Every
/// proper loss is H(q) + dH(q).(delta_x - q) for some such H.
struct concave_generator {
  std::string name;
  std::function<double(const distribution&)> H;
  std::function<std::vector<double>(const distribution&)> dH;
  bool strictly_concave = true;
  /// Closed-form divergence when one is known (test oracle); empty otherwise.
  std::function<double(const distribution&, const distribution&)> divergence_closed_form;
};

/// Built-ins: "shannon", "quad", "invroot", "power:<alpha>" for
/// alpha in (0, 1). invroot coincides with power:0.5; both carry the
/// normalization H(q) = sum q^(1-alpha) / (alpha (1-alpha)) that makes the
/// family 1-strongly concave in l1 (sum q^(1+alpha) <= 1).
concave_generator generator_by_name(const std::string& name);
std::vector<concave_generator> builtin_generators();

concave_generator make_shannon_generator();
concave_generator make_quadratic_generator();
concave_generator make_power_generator(double alpha);
concave_generator make_invroot_generator();
/// Root generator at an explicit scale, H(q) = k * sum sqrt(q); checks
/// the identities l(q,x) = k/(2 sqrt(q_x)) + (k/2) sum sqrt(q).
concave_generator make_scaled_root_generator(double k);

/// l(q, x) = H(q) + dH(q).(delta_x - q). Returns +infinity where the
/// supergradient diverges (e.g. Shannon at a zero coordinate).
double loss_from_generator(const concave_generator& g, const distribution& q,
                           std::size_t x);

/// D_{-H}(p, q) = [H(q) + dH(q).(p - q)] - H(p); equals the expected-loss
/// gap of the generated loss.
double divergence(const concave_generator& g, const distribution& p,
                  const distribution& q);

/// Expected generated loss under p, i.e. sum_x p_x l(q, x).
double expected_generator_loss(const concave_generator& g,
                               const distribution& q, const distribution& p);

/// l1 strong-concavity rate of a separable generator witnessed at q:
/// 1 / sum_x f(q_x), where 1/f(z) = -h''(z).
double separable_rate(const std::function<double(double)>& f,
                      const distribution& q);

struct l2_counterexample_result {
  double l1_dist = 0.0;
  double l2_gap = 0.0;  // quadratic-loss expected gap, exactly 2/N
};

/// p uniform on the first half, q uniform on the second half: l1 distance
/// 2 (disjoint supports) while the quadratic-loss gap is only 2/N.
l2_counterexample_result l2_counterexample(std::size_t n);

}  // namespace caliloss
