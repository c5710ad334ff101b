// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#include "caliloss.h"

#include <cstring>
#include <map>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"

#include "caliloss/bounds.hpp"
#include "caliloss/calibrate.hpp"
#include "caliloss/distribution.hpp"
#include "caliloss/harness.hpp"
#include "caliloss/io.hpp"
#include "caliloss/losses.hpp"
#include "caliloss/scoring.hpp"
#include "caliloss/trigram.hpp"
#include "caliloss/verify.hpp"

using namespace caliloss;

namespace {

thread_local std::string g_last_error;

cl_status map_code(errc code) {
  switch (code) {
    case errc::ok: return CL_OK;
    case errc::negative_probability: return CL_ERR_NEGATIVE_PROBABILITY;
    case errc::sum_out_of_tolerance: return CL_ERR_SUM_OUT_OF_TOLERANCE;
    case errc::domain_mismatch: return CL_ERR_DOMAIN_MISMATCH;
    case errc::domain_too_large: return CL_ERR_DOMAIN_TOO_LARGE;
    case errc::invalid_partition: return CL_ERR_INVALID_PARTITION;
    case errc::zero_mass_bucket: return CL_ERR_ZERO_MASS_BUCKET;
    case errc::missing_rate: return CL_ERR_MISSING_RATE;
    case errc::growth_envelope_too_fast: return CL_ERR_GROWTH_ENVELOPE_TOO_FAST;
    case errc::unsupported_loss: return CL_ERR_UNSUPPORTED_LOSS;
    case errc::parameter_out_of_range: return CL_ERR_PARAMETER_OUT_OF_RANGE;
    case errc::insufficient_samples: return CL_ERR_INSUFFICIENT_SAMPLES;
    case errc::degenerate_input: return CL_ERR_DEGENERATE_INPUT;
    case errc::invalid_shape: return CL_ERR_INVALID_SHAPE;
    case errc::undefined_gradient: return CL_ERR_UNDEFINED_GRADIENT;
    case errc::odd_domain: return CL_ERR_ODD_DOMAIN;
    case errc::empty_corpus: return CL_ERR_EMPTY_CORPUS;
    case errc::bad_line: return CL_ERR_BAD_LINE;
    case errc::alphabet_mismatch: return CL_ERR_ALPHABET_MISMATCH;
    case errc::io_error: return CL_ERR_IO;
    case errc::parse_error: return CL_ERR_PARSE;
    case errc::internal: return CL_ERR_INTERNAL;
  }
  return CL_ERR_INTERNAL;
}

template <typename Fn>
cl_status guard(Fn&& fn) {
  try {
    fn();
    return CL_OK;
  } catch (const error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CL_ERR_INTERNAL;
  }
}

cl_status null_arg() {
  g_last_error = "null argument";
  return CL_ERR_NULL_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct cl_dist {
  distribution d;
};
struct cl_dist_list {
  std::vector<distribution> items;
};
struct cl_empirical {
  empirical_distribution e;
};
struct cl_loss {
  local_loss l;
};
struct cl_generator {
  concave_generator g;
};
struct cl_experiment {
  experiment_result r;
};
struct cl_corpus {
  corpus c;
};
struct cl_trigram {
  trigram_model m;
};

extern "C" {

const char* cl_status_name(cl_status status) {
  switch (status) {
    case CL_OK: return "ok";
    case CL_ERR_NEGATIVE_PROBABILITY: return "NegativeProbability";
    case CL_ERR_SUM_OUT_OF_TOLERANCE: return "SumOutOfTolerance";
    case CL_ERR_DOMAIN_MISMATCH: return "DomainMismatch";
    case CL_ERR_DOMAIN_TOO_LARGE: return "DomainTooLarge";
    case CL_ERR_INVALID_PARTITION: return "InvalidPartition";
    case CL_ERR_ZERO_MASS_BUCKET: return "ZeroMassBucket";
    case CL_ERR_MISSING_RATE: return "MissingRate";
    case CL_ERR_GROWTH_ENVELOPE_TOO_FAST: return "GrowthEnvelopeTooFast";
    case CL_ERR_UNSUPPORTED_LOSS: return "UnsupportedLoss";
    case CL_ERR_PARAMETER_OUT_OF_RANGE: return "ParameterOutOfRange";
    case CL_ERR_INSUFFICIENT_SAMPLES: return "InsufficientSamples";
    case CL_ERR_DEGENERATE_INPUT: return "DegenerateInput";
    case CL_ERR_INVALID_SHAPE: return "InvalidShape";
    case CL_ERR_UNDEFINED_GRADIENT: return "UndefinedGradient";
    case CL_ERR_ODD_DOMAIN: return "OddDomain";
    case CL_ERR_EMPTY_CORPUS: return "EmptyCorpus";
    case CL_ERR_BAD_LINE: return "BadLine";
    case CL_ERR_ALPHABET_MISMATCH: return "AlphabetMismatch";
    case CL_ERR_IO: return "IoError";
    case CL_ERR_PARSE: return "ParseError";
    case CL_ERR_INTERNAL: return "Internal";
    case CL_ERR_NULL_ARGUMENT: return "NullArgument";
  }
  return "Unknown";
}

const char* cl_last_error(void) { return g_last_error.c_str(); }

const char* cl_version(void) { return "0.1.0"; }

void cl_string_free(char* s) { delete[] s; }

/* ---- distributions ---------------------------------------------------- */

cl_status cl_dist_create(const double* probs, size_t n, cl_dist** out) {
  if (!probs || !out) return null_arg();
  return guard([&] {
    *out = new cl_dist{make_distribution(std::vector<double>(probs, probs + n))};
  });
}

cl_status cl_dist_uniform(size_t n, cl_dist** out) {
  if (!out) return null_arg();
  return guard([&] { *out = new cl_dist{uniform_distribution(n)}; });
}

cl_status cl_dist_point_mass(size_t n, size_t x, cl_dist** out) {
  if (!out) return null_arg();
  return guard([&] { *out = new cl_dist{point_mass(n, x)}; });
}

cl_status cl_dist_read(const char* path, cl_dist** out) {
  if (!path || !out) return null_arg();
  return guard([&] { *out = new cl_dist{read_distribution(path)}; });
}

cl_status cl_dist_write_json(const cl_dist* d, const char* path) {
  if (!d || !path) return null_arg();
  return guard([&] { write_distribution_json(d->d, path); });
}

cl_status cl_dist_write_tsv(const cl_dist* d, const char* path) {
  if (!d || !path) return null_arg();
  return guard([&] { write_distribution_tsv(d->d, path); });
}

void cl_dist_free(cl_dist* d) { delete d; }

size_t cl_dist_size(const cl_dist* d) { return d ? d->d.size() : 0; }

cl_status cl_dist_probs(const cl_dist* d, double* out_n) {
  if (!d || !out_n) return null_arg();
  for (std::size_t x = 0; x < d->d.size(); ++x) out_n[x] = d->d.at(x);
  return CL_OK;
}

cl_status cl_dist_l1(const cl_dist* p, const cl_dist* q, double* out) {
  if (!p || !q || !out) return null_arg();
  return guard([&] { *out = l1_distance(p->d, q->d); });
}

cl_status cl_dist_tv(const cl_dist* p, const cl_dist* q, double* out) {
  if (!p || !q || !out) return null_arg();
  return guard([&] { *out = tv_distance(p->d, q->d); });
}

cl_status cl_dist_kl(const cl_dist* p, const cl_dist* q, double* out) {
  if (!p || !q || !out) return null_arg();
  return guard([&] { *out = kl_divergence(p->d, q->d); });
}

cl_status cl_dist_coarsen(const cl_dist* p, const size_t* block_of, size_t n,
                          cl_dist** out) {
  if (!p || !block_of || !out) return null_arg();
  return guard([&] {
    if (n != p->d.size()) raise(errc::invalid_partition, "assignment length mismatch");
    std::map<std::size_t, std::vector<std::size_t>> blocks;
    for (std::size_t x = 0; x < n; ++x) blocks[block_of[x]].push_back(x);
    std::vector<std::vector<std::size_t>> partition;
    partition.reserve(blocks.size());
    for (auto& [id, members] : blocks) partition.push_back(std::move(members));
    *out = new cl_dist{coarsen(p->d, partition)};
  });
}

cl_status cl_dist_is_calibrated(const cl_dist* q, const cl_dist* p, double tol,
                                int* calibrated, double* max_discrepancy,
                                size_t* level_count) {
  if (!q || !p || !calibrated) return null_arg();
  return guard([&] {
    const calibration_report rep = is_calibrated(q->d, p->d, tol);
    *calibrated = rep.calibrated ? 1 : 0;
    if (max_discrepancy) *max_discrepancy = rep.max_discrepancy;
    if (level_count) *level_count = rep.levels.size();
  });
}

cl_status cl_dist_level_count(const cl_dist* q, double rel_tol, size_t* out) {
  if (!q || !out) return null_arg();
  return guard([&] { *out = level_sets(q->d, rel_tol).levels.size(); });
}

cl_status cl_dist_level(const cl_dist* q, double rel_tol, size_t level,
                        double* value, size_t* index_buf, size_t buf_len,
                        size_t* written) {
  if (!q) return null_arg();
  return guard([&] {
    const level_set_partition part = level_sets(q->d, rel_tol);
    if (level >= part.levels.size()) {
      raise(errc::parameter_out_of_range, "level index out of range");
    }
    const level_set& ls = part.levels[level];
    if (value) *value = ls.value;
    std::size_t count = 0;
    if (index_buf) {
      for (; count < ls.indices.size() && count < buf_len; ++count) {
        index_buf[count] = ls.indices[count];
      }
    }
    if (written) *written = index_buf ? count : ls.indices.size();
  });
}

cl_status cl_dist_enumerate_calibrated(const cl_dist* p, size_t max_n,
                                       cl_dist_list** out) {
  if (!p || !out) return null_arg();
  return guard([&] {
    *out = new cl_dist_list{enumerate_calibrated(p->d, max_n)};
  });
}

size_t cl_dist_list_size(const cl_dist_list* list) {
  return list ? list->items.size() : 0;
}

cl_status cl_dist_list_get(const cl_dist_list* list, size_t i, cl_dist** out) {
  if (!list || !out) return null_arg();
  return guard([&] {
    if (i >= list->items.size()) {
      raise(errc::parameter_out_of_range, "list index out of range");
    }
    *out = new cl_dist{list->items[i]};
  });
}

void cl_dist_list_free(cl_dist_list* list) { delete list; }

cl_status cl_dist_sample(const cl_dist* p, uint64_t m, uint64_t seed,
                         cl_empirical** out) {
  if (!p || !out) return null_arg();
  return guard([&] { *out = new cl_empirical{sample(p->d, m, seed)}; });
}

void cl_empirical_free(cl_empirical* e) { delete e; }

uint64_t cl_empirical_total(const cl_empirical* e) { return e ? e->e.m : 0; }

cl_status cl_empirical_count(const cl_empirical* e, size_t x, uint64_t* out) {
  if (!e || !out) return null_arg();
  return guard([&] {
    if (x >= e->e.counts.size()) {
      raise(errc::parameter_out_of_range, "index out of range");
    }
    *out = e->e.counts[x];
  });
}

cl_status cl_conditional_inverse_mean(const cl_dist* p, const size_t* indices,
                                      size_t k, double* out) {
  if (!p || !indices || !out) return null_arg();
  return guard([&] {
    *out = conditional_inverse_mean(p->d, std::vector<std::size_t>(indices, indices + k));
  });
}

cl_status cl_min_mass_ratio(const cl_dist* q, const cl_dist* p, double* out) {
  if (!q || !p || !out) return null_arg();
  return guard([&] { *out = min_mass_ratio(q->d, p->d); });
}

/* ---- losses ------------------------------------------------------------ */

cl_status cl_loss_open(const char* name, cl_loss** out) {
  if (!name || !out) return null_arg();
  return guard([&] { *out = new cl_loss{loss_by_name(name)}; });
}

void cl_loss_free(cl_loss* loss) { delete loss; }

cl_status cl_catalog_names(char** csv_out) {
  if (!csv_out) return null_arg();
  return guard([&] {
    std::ostringstream os;
    bool first = true;
    for (const local_loss& l : builtin_catalog()) {
      os << (first ? "" : ",") << l.name;
      first = false;
    }
    *csv_out = dup_string(os.str());
  });
}

cl_status cl_loss_value(const cl_loss* loss, const cl_dist* q, size_t x,
                        double* out) {
  if (!loss || !q || !out) return null_arg();
  return guard([&] {
    if (x >= q->d.size()) raise(errc::parameter_out_of_range, "index out of range");
    *out = loss_value(loss->l, q->d, x);
  });
}

cl_status cl_loss_expected(const cl_loss* loss, const cl_dist* q,
                           const cl_dist* p, double* out) {
  if (!loss || !q || !p || !out) return null_arg();
  return guard([&] { *out = expected_loss(loss->l, q->d, p->d); });
}

cl_status cl_loss_empirical(const cl_loss* loss, const cl_dist* q,
                            const cl_empirical* phat, double* out) {
  if (!loss || !q || !phat || !out) return null_arg();
  return guard([&] { *out = empirical_loss(loss->l, q->d, phat->e); });
}

cl_status cl_loss_check_concavity(const cl_loss* loss, size_t grid_points,
                                  double* worst_slack, int* ok) {
  if (!loss || !ok) return null_arg();
  return guard([&] {
    const concavity_report rep = check_left_strong_concavity(
        loss->l, default_z_grid(loss->l, grid_points ? grid_points : 400));
    if (worst_slack) *worst_slack = rep.worst_slack;
    *ok = rep.ok ? 1 : 0;
  });
}

cl_status cl_jensen_gap(const cl_loss* loss, const cl_dist* p,
                        const size_t* indices, size_t k, double* bound,
                        double* actual) {
  if (!loss || !p || !indices) return null_arg();
  return guard([&] {
    const std::vector<std::size_t> bucket(indices, indices + k);
    if (bound) *bound = jensen_gap_lower_bound(p->d, bucket, loss->l);
    if (actual) *actual = jensen_gap_actual(p->d, bucket, loss->l);
  });
}

/* ---- bounds ------------------------------------------------------------- */

namespace {
void fill_report(const bound_report& src, cl_bound_report* out) {
  out->ln_beta = src.ln_beta;
  out->ln_m = src.ln_m;
  out->gap = src.gap;
  out->gap_positive = src.gap_positive ? 1 : 0;
  out->vacuous = src.vacuous ? 1 : 0;
}
}  // namespace

cl_status cl_bound_strong_gap(const cl_loss* loss, double n, double eps,
                              double* gap) {
  if (!loss || !gap) return null_arg();
  return guard([&] { *gap = strong_properness_gap_bound(loss->l, n, eps); });
}

cl_status cl_bound_concentration(const cl_loss* loss, double gamma, double delta,
                                 double n, double c1, cl_bound_report* out) {
  if (!loss || !out) return null_arg();
  return guard([&] { fill_report(concentration_bound(loss->l, gamma, delta, n, c1), out); });
}

cl_status cl_bound_sample_proper(const cl_loss* loss, double eps, double delta,
                                 double n, double c1, cl_bound_report* out) {
  if (!loss || !out) return null_arg();
  return guard([&] { fill_report(sample_properness_bound(loss->l, eps, delta, n, c1), out); });
}

cl_status cl_bound_approx_strong(const cl_loss* loss, double n, double eps,
                                 double alpha1, double alpha2,
                                 cl_bound_report* out) {
  if (!loss || !out) return null_arg();
  return guard([&] {
    approx_params params;
    params.alpha1 = alpha1;
    params.alpha2 = alpha2;
    params.eps = eps;
    fill_report(approx_strong_properness_bound(loss->l, n, params), out);
  });
}

cl_status cl_bound_approx_concentration(const cl_loss* loss, double n,
                                        double gamma, double delta,
                                        double alpha1, double alpha2, double c1,
                                        cl_bound_report* out) {
  if (!loss || !out) return null_arg();
  return guard([&] {
    approx_params params;
    params.alpha1 = alpha1;
    params.alpha2 = alpha2;
    params.gamma = gamma;
    params.delta = delta;
    params.c1 = c1;
    fill_report(approx_concentration_bound(loss->l, n, params), out);
  });
}

cl_status cl_bound_approx_sample(const cl_loss* loss, double n, double eps,
                                 double delta, double alpha1, double alpha2,
                                 double c1, cl_bound_report* out) {
  if (!loss || !out) return null_arg();
  return guard([&] {
    approx_params params;
    params.alpha1 = alpha1;
    params.alpha2 = alpha2;
    params.eps = eps;
    params.delta = delta;
    params.c1 = c1;
    fill_report(approx_sample_properness_bound(loss->l, n, params), out);
  });
}

/* ---- scoring ------------------------------------------------------------ */

cl_status cl_generator_open(const char* name, cl_generator** out) {
  if (!name || !out) return null_arg();
  return guard([&] { *out = new cl_generator{generator_by_name(name)}; });
}

void cl_generator_free(cl_generator* g) { delete g; }

cl_status cl_generator_loss(const cl_generator* g, const cl_dist* q, size_t x,
                            double* out) {
  if (!g || !q || !out) return null_arg();
  return guard([&] {
    if (x >= q->d.size()) raise(errc::parameter_out_of_range, "index out of range");
    *out = loss_from_generator(g->g, q->d, x);
  });
}

cl_status cl_generator_divergence(const cl_generator* g, const cl_dist* p,
                                  const cl_dist* q, double* out) {
  if (!g || !p || !q || !out) return null_arg();
  return guard([&] { *out = divergence(g->g, p->d, q->d); });
}

cl_status cl_separable_rate_power(double exponent, const cl_dist* q,
                                  double* out) {
  if (!q || !out) return null_arg();
  return guard([&] {
    *out = separable_rate([exponent](double z) { return std::pow(z, exponent); }, q->d);
  });
}

cl_status cl_l2_counterexample(size_t n, double* l1_dist, double* gap) {
  if (!l1_dist || !gap) return null_arg();
  return guard([&] {
    const l2_counterexample_result r = l2_counterexample(n);
    *l1_dist = r.l1_dist;
    *gap = r.l2_gap;
  });
}

/* ---- calibrate ----------------------------------------------------------- */

cl_status cl_make_approx_calibrated(const cl_dist* q, const cl_dist* p,
                                    cl_approx_params params, uint64_t seed,
                                    double sample_multiplier, cl_dist** q_prime,
                                    char** trace_out) {
  if (!q || !p || !q_prime) return null_arg();
  return guard([&] {
    approx_calibration_params cp{params.alpha1, params.alpha2, params.delta};
    auto [dist, trace] =
        make_approx_calibrated(q->d, sampler(p->d), cp, seed, sample_multiplier);
    *q_prime = new cl_dist{std::move(dist)};
    if (trace_out) *trace_out = dup_string(trace_json(trace));
  });
}

cl_status cl_is_approx_calibrated(const cl_dist* q, const cl_dist* p,
                                  cl_approx_params params, int* passes,
                                  double* witness_mass,
                                  double* worst_under_ratio) {
  if (!q || !p || !passes) return null_arg();
  return guard([&] {
    approx_calibration_params cp{params.alpha1, params.alpha2, params.delta};
    const approx_calibration_report rep = is_approx_calibrated(q->d, p->d, cp);
    *passes = rep.passes ? 1 : 0;
    if (witness_mass) *witness_mass = rep.witness_mass;
    if (worst_under_ratio) *worst_under_ratio = rep.worst_under_ratio;
  });
}

/* ---- harness -------------------------------------------------------------- */

cl_status cl_run_concentration(const cl_loss* loss, const cl_dist* p,
                               const cl_dist* q, uint64_t m, size_t trials,
                               double gamma, uint64_t seed, unsigned threads,
                               cl_experiment** out) {
  if (!loss || !p || !q || !out) return null_arg();
  return guard([&] {
    *out = new cl_experiment{
        run_concentration(loss->l, p->d, q->d, m, trials, gamma, seed, threads)};
  });
}

cl_status cl_run_sample_properness(const cl_loss* loss, const cl_dist* p,
                                   const cl_dist* q, uint64_t m, size_t trials,
                                   uint64_t seed, unsigned threads,
                                   cl_experiment** out) {
  if (!loss || !p || !q || !out) return null_arg();
  return guard([&] {
    *out = new cl_experiment{
        run_sample_properness(loss->l, p->d, q->d, m, trials, seed, threads)};
  });
}

cl_status cl_demo_logloss_nonconcentration(size_t n, uint64_t m, size_t trials,
                                           uint64_t seed, unsigned threads,
                                           cl_experiment** out) {
  if (!out) return null_arg();
  return guard([&] {
    *out = new cl_experiment{
        demo_logloss_nonconcentration(n, m, trials, seed, threads)};
  });
}

cl_status cl_demo_linear_improperness(size_t n, uint64_t m, size_t trials,
                                      uint64_t seed, unsigned threads,
                                      cl_experiment** out) {
  if (!out) return null_arg();
  return guard([&] {
    *out = new cl_experiment{
        demo_linear_loss_improperness(n, m, trials, seed, threads)};
  });
}

cl_status cl_sweep_strong_properness(const cl_loss* loss, size_t n_max,
                                     size_t trials, uint64_t seed,
                                     unsigned threads, cl_experiment** out) {
  if (!loss || !out) return null_arg();
  return guard([&] {
    *out = new cl_experiment{
        sweep_strong_properness(loss->l, n_max, trials, seed, threads)};
  });
}

void cl_experiment_free(cl_experiment* e) { delete e; }

cl_status cl_experiment_stat(const cl_experiment* e, const char* key,
                             double* out) {
  if (!e || !key || !out) return null_arg();
  return guard([&] {
    const std::string k(key);
    const summary_stats& s = e->r.summary;
    if (k == "summary.mean") { *out = s.mean; return; }
    if (k == "summary.median") { *out = s.median; return; }
    if (k == "summary.q05") { *out = s.q05; return; }
    if (k == "summary.q95") { *out = s.q95; return; }
    if (k == "summary.min") { *out = s.min; return; }
    if (k == "summary.max") { *out = s.max; return; }
    if (k == "summary.failure_rate") { *out = s.failure_rate; return; }
    if (k == "summary.trials") { *out = static_cast<double>(s.trials); return; }
    const auto it = e->r.stats.find(k);
    if (it == e->r.stats.end()) {
      raise(errc::parameter_out_of_range, "unknown experiment stat: " + k);
    }
    *out = it->second;
  });
}

cl_status cl_experiment_csv(const cl_experiment* e, char** out) {
  if (!e || !out) return null_arg();
  return guard([&] { *out = dup_string(experiment_csv(e->r)); });
}

cl_status cl_experiment_json(const cl_experiment* e, char** out) {
  if (!e || !out) return null_arg();
  return guard([&] { *out = dup_string(experiment_json(e->r)); });
}

/* ---- verify ---------------------------------------------------------------- */

cl_status cl_verify_suite(const char* suite, size_t trials, size_t n_max,
                          uint64_t seed, unsigned threads,
                          cl_verify_check* checks, size_t cap, size_t* written,
                          int* pass) {
  if (!suite || !pass) return null_arg();
  return guard([&] {
    const verify::suite_result result =
        verify::run_suite(suite, trials, n_max, seed, threads);
    std::size_t count = 0;
    if (checks) {
      for (const auto& c : result.checks) {
        if (count >= cap) break;
        cl_verify_check& out = checks[count];
        std::snprintf(out.name, sizeof(out.name), "%s", c.name.c_str());
        out.pass = c.pass ? 1 : 0;
        out.worst = c.worst;
        out.threshold = c.threshold;
        out.checks = static_cast<long>(c.checks);
        out.violations = static_cast<long>(c.violations);
        ++count;
      }
    }
    if (written) *written = checks ? count : result.checks.size();
    *pass = result.pass() ? 1 : 0;
  });
}

cl_status cl_verify_suite_names(char** csv_out) {
  if (!csv_out) return null_arg();
  return guard([&] {
    std::ostringstream os;
    bool first = true;
    for (const std::string& name : verify::suite_names()) {
      os << (first ? "" : ",") << name;
      first = false;
    }
    *csv_out = dup_string(os.str());
  });
}

/* ---- trigram ----------------------------------------------------------------- */

cl_status cl_corpus_load(const char* path, cl_corpus** out) {
  if (!path || !out) return null_arg();
  return guard([&] { *out = new cl_corpus{ingest_corpus(path)}; });
}

void cl_corpus_free(cl_corpus* c) { delete c; }

size_t cl_corpus_size(const cl_corpus* c) { return c ? c->c.entries.size() : 0; }

size_t cl_corpus_dropped_duplicates(const cl_corpus* c) {
  return c ? c->c.dropped_duplicates : 0;
}

cl_status cl_corpus_mix(const cl_corpus* base, const cl_corpus* noise,
                        double mass, cl_corpus** out) {
  if (!base || !noise || !out) return null_arg();
  return guard([&] { *out = new cl_corpus{mix_noise(base->c, noise->c, mass)}; });
}

namespace {
std::vector<local_loss> parse_loss_csv(const std::string& csv) {
  std::vector<local_loss> losses;
  std::istringstream in(csv);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) losses.push_back(loss_by_name(token));
  }
  if (losses.empty()) raise(errc::parameter_out_of_range, "no losses given");
  return losses;
}
}  // namespace

cl_status cl_corpus_eval(const cl_corpus* c, const char* losses_csv,
                         char** json_out) {
  if (!c || !losses_csv || !json_out) return null_arg();
  return guard([&] {
    nlohmann::json doc;
    for (const auto& row : evaluate_corpus_as_model(c->c, parse_loss_csv(losses_csv))) {
      doc["losses"][row.loss] = row.value;
    }
    doc["head_weight"] = c->c.head_weight();
    *json_out = dup_string(doc.dump(2) + "\n");
  });
}

cl_status cl_trigram_train(const cl_corpus* c, double alpha, double smoothing,
                           cl_trigram** out) {
  if (!c || !out) return null_arg();
  return guard([&] { *out = new cl_trigram{train_trigram(c->c, alpha, smoothing)}; });
}

void cl_trigram_free(cl_trigram* t) { delete t; }

cl_status cl_trigram_word_prob(const cl_trigram* t, const char* word,
                               double* out) {
  if (!t || !word || !out) return null_arg();
  return guard([&] { *out = t->m.word_probability(word); });
}

cl_status cl_trigram_head_mass(const cl_trigram* t, const cl_corpus* c,
                               double* out) {
  if (!t || !c || !out) return null_arg();
  return guard([&] { *out = head_mass(t->m, c->c); });
}

cl_status cl_trigram_corpus_mass(const cl_trigram* t, const cl_corpus* c,
                                 double* out) {
  if (!t || !c || !out) return null_arg();
  return guard([&] { *out = corpus_model_mass(t->m, c->c); });
}

cl_status cl_trigram_eval(const cl_trigram* t, const cl_corpus* c,
                          const char* losses_csv, char** json_out) {
  if (!t || !c || !losses_csv || !json_out) return null_arg();
  return guard([&] {
    nlohmann::json doc;
    for (const auto& row : evaluate_trigram(t->m, c->c, parse_loss_csv(losses_csv))) {
      doc["losses"][row.loss] =
          std::isfinite(row.value) ? nlohmann::json(row.value) : nlohmann::json("inf");
    }
    doc["head_mass"] = head_mass(t->m, c->c);
    doc["corpus_mass"] = corpus_model_mass(t->m, c->c);
    *json_out = dup_string(doc.dump(2) + "\n");
  });
}

cl_status cl_trigram_sample(const cl_trigram* t, size_t k, size_t max_len,
                            uint64_t seed, char** newline_joined) {
  if (!t || !newline_joined) return null_arg();
  return guard([&] {
    std::ostringstream os;
    for (const std::string& w : sample_words(t->m, k, max_len, seed)) {
      os << w << '\n';
    }
    *newline_joined = dup_string(os.str());
  });
}

cl_status cl_trigram_cumcurve_csv(const cl_trigram* t, const cl_corpus* c,
                                  char** csv_out) {
  if (!t || !c || !csv_out) return null_arg();
  return guard([&] {
    std::vector<std::vector<std::string>> rows;
    for (const cumulative_point& pt : cumulative_mass_curve(t->m, c->c)) {
      rows.push_back({std::to_string(pt.rank), format_double(pt.p_cum),
                      format_double(pt.q_cum)});
    }
    *csv_out = dup_string(format_csv({"rank", "p_cum", "q_cum"}, rows));
  });
}

} /* extern "C" */
