// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#include "caliloss/scoring.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace caliloss {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

concave_generator make_shannon_generator() {
  concave_generator g;
  g.name = "shannon";
  g.H = [](const distribution& q) {
    double h = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) {
      const double v = q.at(x);
      if (v > 0.0) h -= v * std::log(v);
    }
    return h;
  };
  g.dH = [](const distribution& q) {
    std::vector<double> grad(q.size());
    for (std::size_t x = 0; x < q.size(); ++x) {
      const double v = q.at(x);
      grad[x] = v > 0.0 ? -std::log(v) - 1.0 : kInf;
    }
    return grad;
  };
  g.divergence_closed_form = [](const distribution& p, const distribution& q) {
    return kl_divergence(p, q);
  };
  return g;
}

concave_generator make_quadratic_generator() {
  concave_generator g;
  g.name = "quad";
  g.H = [](const distribution& q) {
    double ss = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) ss += q.at(x) * q.at(x);
    return 0.5 - 0.5 * ss;
  };
  g.dH = [](const distribution& q) {
    std::vector<double> grad(q.size());
    for (std::size_t x = 0; x < q.size(); ++x) grad[x] = -q.at(x);
    return grad;
  };
  g.divergence_closed_form = [](const distribution& p, const distribution& q) {
    double ss = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
      const double d = p.at(x) - q.at(x);
      ss += d * d;
    }
    return 0.5 * ss;
  };
  return g;
}

concave_generator make_power_generator(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    raise(errc::parameter_out_of_range, "power generator needs alpha in (0, 1)");
  }
  concave_generator g;
  std::ostringstream name;
  name << "power:" << alpha;
  g.name = name.str();
  // h''(z) = -z^(-1-alpha), i.e. 1/f(z) = -h'' with f(z) = z^(1+alpha);
  // sum_x q_x^(1+alpha) <= 1 makes H 1-strongly concave in l1.
  const double scale = 1.0 / (alpha * (1.0 - alpha));
  g.H = [alpha, scale](const distribution& q) {
    double h = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) h += std::pow(q.at(x), 1.0 - alpha);
    return scale * h;
  };
  g.dH = [alpha, scale](const distribution& q) {
    std::vector<double> grad(q.size());
    for (std::size_t x = 0; x < q.size(); ++x) {
      const double v = q.at(x);
      grad[x] = v > 0.0 ? scale * (1.0 - alpha) * std::pow(v, -alpha) : kInf;
    }
    return grad;
  };
  g.divergence_closed_form = [alpha, scale](const distribution& p,
                                            const distribution& q) {
    // sum over x of scale * [(1-alpha) p q^-alpha + alpha q^(1-alpha) - p^(1-alpha)]
    double d = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
      const double px = p.at(x), qx = q.at(x);
      if (qx == 0.0) {
        if (px > 0.0) return kInf;
        continue;
      }
      d += scale * ((1.0 - alpha) * px * std::pow(qx, -alpha) +
                    alpha * std::pow(qx, 1.0 - alpha) - std::pow(px, 1.0 - alpha));
    }
    return d;
  };
  return g;
}

concave_generator make_invroot_generator() {
  concave_generator g = make_power_generator(0.5);
  g.name = "invroot";
  // At alpha = 1/2 the closed form tidies to 2 sum (1/sqrt(q))(sqrt(p)-sqrt(q))^2.
  g.divergence_closed_form = [](const distribution& p, const distribution& q) {
    double d = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
      const double qx = q.at(x);
      if (qx == 0.0) {
        if (p.at(x) > 0.0) return kInf;
        continue;
      }
      const double diff = std::sqrt(p.at(x)) - std::sqrt(qx);
      d += 2.0 * diff * diff / std::sqrt(qx);
    }
    return d;
  };
  return g;
}

concave_generator make_scaled_root_generator(double k) {
  concave_generator g;
  std::ostringstream name;
  name << "root-scale:" << k;
  g.name = name.str();
  g.H = [k](const distribution& q) {
    double h = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) h += std::sqrt(q.at(x));
    return k * h;
  };
  g.dH = [k](const distribution& q) {
    std::vector<double> grad(q.size());
    for (std::size_t x = 0; x < q.size(); ++x) {
      const double v = q.at(x);
      grad[x] = v > 0.0 ? 0.5 * k / std::sqrt(v) : kInf;
    }
    return grad;
  };
  g.divergence_closed_form = [k](const distribution& p, const distribution& q) {
    double d = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
      const double qx = q.at(x);
      if (qx == 0.0) {
        if (p.at(x) > 0.0) return kInf;
        continue;
      }
      const double diff = std::sqrt(p.at(x)) - std::sqrt(qx);
      d += 0.5 * k * diff * diff / std::sqrt(qx);
    }
    return d;
  };
  return g;
}

std::vector<concave_generator> builtin_generators() {
  return {make_shannon_generator(), make_quadratic_generator(),
          make_invroot_generator()};
}

concave_generator generator_by_name(const std::string& name) {
  if (name == "shannon") return make_shannon_generator();
  if (name == "quad") return make_quadratic_generator();
  if (name == "invroot") return make_invroot_generator();
  if (name.rfind("power:", 0) == 0) {
    const std::string arg = name.substr(6);
    try {
      std::size_t used = 0;
      const double alpha = std::stod(arg, &used);
      if (used == arg.size()) return make_power_generator(alpha);
    } catch (const std::exception&) {
    }
    raise(errc::parse_error, "bad power generator parameter: " + arg);
  }
  raise(errc::unsupported_loss, "unknown generator name: " + name);
}

double loss_from_generator(const concave_generator& g, const distribution& q,
                           std::size_t x) {
  const std::vector<double> grad = g.dH(q);
  if (grad[x] == kInf) return kInf;
  double dot = 0.0;
  bool diverges = false;
  for (std::size_t y = 0; y < q.size(); ++y) {
    if (grad[y] == kInf) {
      // Diverging coordinate with q_y = 0 contributes grad_y * (0 - 0) = 0.
      if (q.at(y) != 0.0) diverges = true;
      continue;
    }
    dot += grad[y] * ((y == x ? 1.0 : 0.0) - q.at(y));
  }
  if (diverges) return kInf;
  return g.H(q) + dot;
}

double divergence(const concave_generator& g, const distribution& p,
                  const distribution& q) {
  if (!p.same_domain(q)) raise(errc::domain_mismatch, "p and q have different domains");
  const std::vector<double> grad = g.dH(q);
  double dot = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double w = p.at(x) - q.at(x);
    if (grad[x] == kInf) {
      if (w > 0.0) return kInf;  // mass on a coordinate where dH diverges
      continue;                  // w == 0 contributes nothing
    }
    dot += grad[x] * w;
  }
  return g.H(q) + dot - g.H(p);
}

double expected_generator_loss(const concave_generator& g,
                               const distribution& q, const distribution& p) {
  if (!p.same_domain(q)) raise(errc::domain_mismatch, "p and q have different domains");
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p.at(x) == 0.0) continue;
    const double v = loss_from_generator(g, q, x);
    if (v == kInf) return kInf;
    total += p.at(x) * v;
  }
  return total;
}

double separable_rate(const std::function<double(double)>& f,
                      const distribution& q) {
  double total = 0.0;
  for (std::size_t x = 0; x < q.size(); ++x) total += f(q.at(x));
  return 1.0 / total;
}

l2_counterexample_result l2_counterexample(std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    raise(errc::odd_domain, "counterexample needs an even domain of size >= 2");
  }
  std::vector<double> p(n, 0.0), q(n, 0.0);
  const double half = 2.0 / static_cast<double>(n);
  for (std::size_t x = 0; x < n / 2; ++x) p[x] = half;
  for (std::size_t x = n / 2; x < n; ++x) q[x] = half;
  const distribution dp = make_distribution(p);
  const distribution dq = make_distribution(q);
  l2_counterexample_result out;
  out.l1_dist = l1_distance(dp, dq);
  out.l2_gap = divergence(make_quadratic_generator(), dp, dq);
  return out;
}

}  // namespace caliloss
