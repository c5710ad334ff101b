// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "caliloss/losses.hpp"

namespace caliloss {

enum class bound_kind {
  strong_proper,
  concentration,
  sample_proper,
  approx_strong_proper,
  approx_concentration,
  approx_sample_proper,
};

const char* bound_kind_name(bound_kind k);

/// Evaluated closed-form theorem bound. beta scales like N^8/delta, so
/// everything beta-dependent is carried in log space; f(beta) is composed
/// analytically from ln(beta) per loss and never evaluated at beta itself.
struct bound_report {
  bound_kind kind = bound_kind::strong_proper;
  std::string loss;
  double n = 0.0;
  double eps = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double alpha1 = std::numeric_limits<double>::quiet_NaN();
  double alpha2 = std::numeric_limits<double>::quiet_NaN();
  double c1 = 1.0;

  double ln_beta = std::numeric_limits<double>::quiet_NaN();
  double ln_m = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  bool gap_positive = true;
  bool vacuous = false;  // required m exceeds N (theorems assume m <= N)
};

/// Strong-properness gap bound: C(4N/eps) * eps^2 / 128, for 0 < eps <= 2.
double strong_properness_gap_bound(const local_loss& loss, double n, double eps);

/// Concentration sample bound: ln(beta) = ln 16 + 8 ln N - ln(delta)
/// - min(0, 2 ln(gamma/c)); ln(m) = ln c1 + 2 ln f(beta) + ln ln(1/delta)
/// - 2 ln gamma. Requires a nonnegative f with growth exponent <= 1/2.
bound_report concentration_bound(const local_loss& loss, double gamma,
                                 double delta, double n, double c1 = 1.0);

/// Sample-properness bound, with beta per the 288 N^8 expression and
/// the strong-properness gap standing in for gamma inside the min.
bound_report sample_properness_bound(const local_loss& loss, double eps,
                                     double delta, double n, double c1 = 1.0);

struct approx_params {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double eps = std::numeric_limits<double>::quiet_NaN();
  double c1 = 1.0;
};

/// The three approximate-calibration forms. The strong-proper gap may be
/// negative; it is reported as-is with gap_positive cleared.
bound_report approx_strong_properness_bound(const local_loss& loss, double n,
                                            const approx_params& params);
bound_report approx_concentration_bound(const local_loss& loss, double n,
                                        const approx_params& params);
bound_report approx_sample_properness_bound(const local_loss& loss, double n,
                                            const approx_params& params);

}  // namespace caliloss
