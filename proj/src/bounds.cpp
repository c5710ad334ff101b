// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#include "caliloss/bounds.hpp"

#include <cmath>

namespace caliloss {

namespace {

void require_sample_bound_loss(const local_loss& loss) {
  if (loss.growth_r > 0.5) {
    raise(errc::growth_envelope_too_fast,
          "loss " + loss.name + " grows faster than c*sqrt(z)");
  }
  if (!loss.nonnegative) {
    raise(errc::unsupported_loss,
          "loss " + loss.name + " is not nonnegative; the sample bounds do not apply");
  }
}

double check_gamma_delta(double gamma, double delta) {
  if (!(gamma > 0.0 && gamma < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    raise(errc::parameter_out_of_range, "gamma and delta must lie in (0, 1)");
  }
  return gamma;
}

/// ln beta for beta = scale * N^8 / (delta * min(1, (x/c)^2)).
double ln_beta_n8(double scale, double n, double delta, double x, double c) {
  return std::log(scale) + 8.0 * std::log(n) - std::log(delta) -
         std::min(0.0, 2.0 * std::log(x / c));
}

double ln_m_from(const local_loss& loss, double c1, double ln_beta,
                 double delta, double denom) {
  const double f_beta = loss.f_of_ln(ln_beta);
  return std::log(c1) + 2.0 * std::log(f_beta) +
         std::log(std::log(1.0 / delta)) - 2.0 * std::log(denom);
}

}  // namespace

const char* bound_kind_name(bound_kind k) {
  switch (k) {
    case bound_kind::strong_proper: return "strong-proper";
    case bound_kind::concentration: return "concentration";
    case bound_kind::sample_proper: return "sample-proper";
    case bound_kind::approx_strong_proper: return "approx-strong-proper";
    case bound_kind::approx_concentration: return "approx-concentration";
    case bound_kind::approx_sample_proper: return "approx-sample-proper";
  }
  return "unknown";
}

double strong_properness_gap_bound(const local_loss& loss, double n, double eps) {
  if (!(eps > 0.0 && eps <= 2.0)) {
    raise(errc::parameter_out_of_range, "eps must lie in (0, 2]");
  }
  if (!loss.rate_C) raise(errc::missing_rate, "loss " + loss.name + " has no rate C");
  return loss.rate_C(4.0 * n / eps) * eps * eps / 128.0;
}

bound_report concentration_bound(const local_loss& loss, double gamma,
                                 double delta, double n, double c1) {
  check_gamma_delta(gamma, delta);
  require_sample_bound_loss(loss);
  bound_report r;
  r.kind = bound_kind::concentration;
  r.loss = loss.name;
  r.n = n;
  r.gamma = gamma;
  r.delta = delta;
  r.c1 = c1;
  r.ln_beta = ln_beta_n8(16.0, n, delta, gamma, loss.growth_c);
  r.ln_m = ln_m_from(loss, c1, r.ln_beta, delta, gamma);
  r.vacuous = r.ln_m > std::log(n);
  return r;
}

bound_report sample_properness_bound(const local_loss& loss, double eps,
                                     double delta, double n, double c1) {
  if (!(eps > 0.0 && eps <= 2.0)) {
    raise(errc::parameter_out_of_range, "eps must lie in (0, 2]");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    raise(errc::parameter_out_of_range, "delta must lie in (0, 1)");
  }
  require_sample_bound_loss(loss);
  bound_report r;
  r.kind = bound_kind::sample_proper;
  r.loss = loss.name;
  r.n = n;
  r.eps = eps;
  r.delta = delta;
  r.c1 = c1;
  // The strong-properness gap fixes the concentration scale that beta uses.
  const double gap = strong_properness_gap_bound(loss, n, eps);
  r.gap = gap;
  r.ln_beta = ln_beta_n8(288.0, n, delta, gap, loss.growth_c);
  const double denom = loss.rate_C(4.0 * n / eps) * eps * eps;
  r.ln_m = ln_m_from(loss, c1, r.ln_beta, delta, denom);
  r.vacuous = r.ln_m > std::log(n);
  return r;
}

bound_report approx_strong_properness_bound(const local_loss& loss, double n,
                                            const approx_params& params) {
  const double a1 = params.alpha1, a2 = params.alpha2, eps = params.eps;
  if (!(a1 >= 0.0 && a1 <= 0.5)) {
    raise(errc::parameter_out_of_range, "alpha1 must lie in [0, 1/2]");
  }
  if (!(a2 >= 0.0) || !(eps > 0.0 && eps <= 2.0)) {
    raise(errc::parameter_out_of_range, "alpha2 must be >= 0 and eps in (0, 2]");
  }
  bound_report r;
  r.kind = bound_kind::approx_strong_proper;
  r.loss = loss.name;
  r.n = n;
  r.eps = eps;
  r.alpha1 = a1;
  r.alpha2 = a2;
  if (a2 == 0.0) {
    if (a1 != 0.0) {
      raise(errc::parameter_out_of_range,
            "alpha2 = 0 requires alpha1 = 0 (exact calibration limit)");
    }
    r.gap = strong_properness_gap_bound(loss, n, eps);
    r.gap_positive = r.gap > 0.0;
    return r;
  }
  const double arg = n / (2.0 * a2);
  const double effective = std::max(0.0, eps - a1 - 5.0 * a2);
  r.gap = loss.rate_C(arg) / 32.0 * effective * effective -
          2.0 * a1 * loss.deriv_D(arg) - 3.0 * a2 * loss.f(n / (3.0 * a2));
  r.gap_positive = r.gap > 0.0;
  return r;
}

bound_report approx_concentration_bound(const local_loss& loss, double n,
                                        const approx_params& params) {
  check_gamma_delta(params.gamma, params.delta);
  if (!(params.alpha1 >= 0.0 && params.alpha1 <= 0.5)) {
    raise(errc::parameter_out_of_range, "alpha1 must lie in [0, 1/2]");
  }
  require_sample_bound_loss(loss);
  bound_report r;
  r.kind = bound_kind::approx_concentration;
  r.loss = loss.name;
  r.n = n;
  r.gamma = params.gamma;
  r.delta = params.delta;
  r.alpha1 = params.alpha1;
  r.alpha2 = params.alpha2;
  r.c1 = params.c1;
  r.ln_beta = ln_beta_n8(32.0, n, params.delta, params.gamma, loss.growth_c);
  r.ln_m = ln_m_from(loss, params.c1, r.ln_beta, params.delta, params.gamma);
  r.vacuous = r.ln_m > std::log(n);
  return r;
}

bound_report approx_sample_properness_bound(const local_loss& loss, double n,
                                            const approx_params& params) {
  const double a1 = params.alpha1, a2 = params.alpha2, eps = params.eps;
  if (!(eps > 0.0 && eps <= 2.0)) {
    raise(errc::parameter_out_of_range, "eps must lie in (0, 2]");
  }
  if (!(params.delta > 0.0 && params.delta < 1.0)) {
    raise(errc::parameter_out_of_range, "delta must lie in (0, 1)");
  }
  const double cap = eps * eps / 12.0;
  if (!(a1 >= 0.0 && a1 <= cap) || !(a2 > 0.0 && a2 <= cap)) {
    raise(errc::parameter_out_of_range,
          "approx sample properness needs alpha1, alpha2 <= eps^2/12");
  }
  require_sample_bound_loss(loss);
  bound_report r;
  r.kind = bound_kind::approx_sample_proper;
  r.loss = loss.name;
  r.n = n;
  r.eps = eps;
  r.delta = params.delta;
  r.alpha1 = a1;
  r.alpha2 = a2;
  r.c1 = params.c1;
  const double gamma = loss.rate_C(2.0 * n / a2) * eps * eps / 128.0;
  r.ln_beta = ln_beta_n8(576.0, n, params.delta, gamma, loss.growth_c);
  const double denom = loss.rate_C(n / (2.0 * a2)) * eps * eps;
  r.ln_m = ln_m_from(loss, params.c1, r.ln_beta, params.delta, denom);
  r.vacuous = r.ln_m > std::log(n);
  // Guaranteed empirical-gap lower bound at this m.
  const double arg = n / (2.0 * a2);
  r.gap = loss.rate_C(arg) * eps * eps / 384.0 -
          2.0 * a1 * loss.deriv_D(arg) - 3.0 * a2 * loss.f(n / (3.0 * a2));
  r.gap_positive = r.gap > 0.0;
  return r;
}

}  // namespace caliloss
