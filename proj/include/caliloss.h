/* Copyright 2026 The caliloss authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API for the caliloss shared library. All functions return cl_status;
 * outputs are written through pointers. Handles are opaque and must be
 * released with the matching *_free. On failure, cl_last_error() returns a
 * thread-local message describing the most recent error in this thread.
 */

#ifndef CALILOSS_H
#define CALILOSS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CL_API __declspec(dllexport)
#else
#define CL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cl_status {
  CL_OK = 0,
  CL_ERR_NEGATIVE_PROBABILITY,
  CL_ERR_SUM_OUT_OF_TOLERANCE,
  CL_ERR_DOMAIN_MISMATCH,
  CL_ERR_DOMAIN_TOO_LARGE,
  CL_ERR_INVALID_PARTITION,
  CL_ERR_ZERO_MASS_BUCKET,
  CL_ERR_MISSING_RATE,
  CL_ERR_GROWTH_ENVELOPE_TOO_FAST,
  CL_ERR_UNSUPPORTED_LOSS,
  CL_ERR_PARAMETER_OUT_OF_RANGE,
  CL_ERR_INSUFFICIENT_SAMPLES,
  CL_ERR_DEGENERATE_INPUT,
  CL_ERR_INVALID_SHAPE,
  CL_ERR_UNDEFINED_GRADIENT,
  CL_ERR_ODD_DOMAIN,
  CL_ERR_EMPTY_CORPUS,
  CL_ERR_BAD_LINE,
  CL_ERR_ALPHABET_MISMATCH,
  CL_ERR_IO,
  CL_ERR_PARSE,
  CL_ERR_INTERNAL,
  CL_ERR_NULL_ARGUMENT,
} cl_status;

CL_API const char* cl_status_name(cl_status status);
CL_API const char* cl_last_error(void);
CL_API const char* cl_version(void);
CL_API void cl_string_free(char* s);

/* ---- distributions ---------------------------------------------------- */

typedef struct cl_dist cl_dist;
typedef struct cl_dist_list cl_dist_list;
typedef struct cl_empirical cl_empirical;

CL_API cl_status cl_dist_create(const double* probs, size_t n, cl_dist** out);
CL_API cl_status cl_dist_uniform(size_t n, cl_dist** out);
CL_API cl_status cl_dist_point_mass(size_t n, size_t x, cl_dist** out);
CL_API cl_status cl_dist_read(const char* path, cl_dist** out);
CL_API cl_status cl_dist_write_json(const cl_dist* d, const char* path);
CL_API cl_status cl_dist_write_tsv(const cl_dist* d, const char* path);
CL_API void cl_dist_free(cl_dist* d);
CL_API size_t cl_dist_size(const cl_dist* d);
CL_API cl_status cl_dist_probs(const cl_dist* d, double* out_n);

CL_API cl_status cl_dist_l1(const cl_dist* p, const cl_dist* q, double* out);
CL_API cl_status cl_dist_tv(const cl_dist* p, const cl_dist* q, double* out);
CL_API cl_status cl_dist_kl(const cl_dist* p, const cl_dist* q, double* out);

/* block_of has one block id per index; blocks may be numbered arbitrarily. */
CL_API cl_status cl_dist_coarsen(const cl_dist* p, const size_t* block_of,
                                 size_t n, cl_dist** out);
CL_API cl_status cl_dist_is_calibrated(const cl_dist* q, const cl_dist* p,
                                       double tol, int* calibrated,
                                       double* max_discrepancy,
                                       size_t* level_count);
CL_API cl_status cl_dist_level_count(const cl_dist* q, double rel_tol,
                                     size_t* out);
CL_API cl_status cl_dist_level(const cl_dist* q, double rel_tol, size_t level,
                               double* value, size_t* index_buf, size_t buf_len,
                               size_t* written);

CL_API cl_status cl_dist_enumerate_calibrated(const cl_dist* p, size_t max_n,
                                              cl_dist_list** out);
CL_API size_t cl_dist_list_size(const cl_dist_list* list);
CL_API cl_status cl_dist_list_get(const cl_dist_list* list, size_t i,
                                  cl_dist** out);
CL_API void cl_dist_list_free(cl_dist_list* list);

CL_API cl_status cl_dist_sample(const cl_dist* p, uint64_t m, uint64_t seed,
                                cl_empirical** out);
CL_API void cl_empirical_free(cl_empirical* e);
CL_API uint64_t cl_empirical_total(const cl_empirical* e);
CL_API cl_status cl_empirical_count(const cl_empirical* e, size_t x,
                                    uint64_t* out);

CL_API cl_status cl_conditional_inverse_mean(const cl_dist* p,
                                             const size_t* indices, size_t k,
                                             double* out);
CL_API cl_status cl_min_mass_ratio(const cl_dist* q, const cl_dist* p,
                                   double* out);

/* ---- local losses ------------------------------------------------------ */

typedef struct cl_loss cl_loss;

/* Names: "log", "powlog:<p>", "loglog", "sqlog", "linear", "negsqrt". */
CL_API cl_status cl_loss_open(const char* name, cl_loss** out);
CL_API void cl_loss_free(cl_loss* loss);
CL_API cl_status cl_catalog_names(char** csv_out);

CL_API cl_status cl_loss_value(const cl_loss* loss, const cl_dist* q, size_t x,
                               double* out);
CL_API cl_status cl_loss_expected(const cl_loss* loss, const cl_dist* q,
                                  const cl_dist* p, double* out);
CL_API cl_status cl_loss_empirical(const cl_loss* loss, const cl_dist* q,
                                   const cl_empirical* phat, double* out);
CL_API cl_status cl_loss_check_concavity(const cl_loss* loss,
                                         size_t grid_points,
                                         double* worst_slack, int* ok);
CL_API cl_status cl_jensen_gap(const cl_loss* loss, const cl_dist* p,
                               const size_t* indices, size_t k, double* bound,
                               double* actual);

/* ---- theorem bounds ----------------------------------------------------- */

typedef struct cl_bound_report {
  double ln_beta;
  double ln_m;
  double gap;
  int gap_positive;
  int vacuous;
} cl_bound_report;

CL_API cl_status cl_bound_strong_gap(const cl_loss* loss, double n, double eps,
                                     double* gap);
CL_API cl_status cl_bound_concentration(const cl_loss* loss, double gamma,
                                        double delta, double n, double c1,
                                        cl_bound_report* out);
CL_API cl_status cl_bound_sample_proper(const cl_loss* loss, double eps,
                                        double delta, double n, double c1,
                                        cl_bound_report* out);
CL_API cl_status cl_bound_approx_strong(const cl_loss* loss, double n,
                                        double eps, double alpha1,
                                        double alpha2, cl_bound_report* out);
CL_API cl_status cl_bound_approx_concentration(const cl_loss* loss, double n,
                                               double gamma, double delta,
                                               double alpha1, double alpha2,
                                               double c1, cl_bound_report* out);
CL_API cl_status cl_bound_approx_sample(const cl_loss* loss, double n,
                                        double eps, double delta, double alpha1,
                                        double alpha2, double c1,
                                        cl_bound_report* out);

/* ---- scoring (generators) ---------------------------------------------- */

typedef struct cl_generator cl_generator;

/* Names: "shannon", "quad", "invroot", "power:<alpha>". */
CL_API cl_status cl_generator_open(const char* name, cl_generator** out);
CL_API void cl_generator_free(cl_generator* g);
CL_API cl_status cl_generator_loss(const cl_generator* g, const cl_dist* q,
                                   size_t x, double* out);
CL_API cl_status cl_generator_divergence(const cl_generator* g,
                                         const cl_dist* p, const cl_dist* q,
                                         double* out);
/* l1 strong-concavity rate 1 / sum_x q_x^exponent. */
CL_API cl_status cl_separable_rate_power(double exponent, const cl_dist* q,
                                         double* out);
CL_API cl_status cl_l2_counterexample(size_t n, double* l1_dist, double* gap);

/* ---- approximate calibration -------------------------------------------- */

typedef struct cl_approx_params {
  double alpha1;
  double alpha2;
  double delta;
} cl_approx_params;

/* trace_json (optional) receives a JSON dump of the construction trace. */
CL_API cl_status cl_make_approx_calibrated(const cl_dist* q, const cl_dist* p,
                                           cl_approx_params params,
                                           uint64_t seed,
                                           double sample_multiplier,
                                           cl_dist** q_prime,
                                           char** trace_json);
CL_API cl_status cl_is_approx_calibrated(const cl_dist* q, const cl_dist* p,
                                         cl_approx_params params, int* passes,
                                         double* witness_mass,
                                         double* worst_under_ratio);

/* ---- Monte Carlo harness ------------------------------------------------ */

typedef struct cl_experiment cl_experiment;

CL_API cl_status cl_run_concentration(const cl_loss* loss, const cl_dist* p,
                                      const cl_dist* q, uint64_t m,
                                      size_t trials, double gamma,
                                      uint64_t seed, unsigned threads,
                                      cl_experiment** out);
CL_API cl_status cl_run_sample_properness(const cl_loss* loss, const cl_dist* p,
                                          const cl_dist* q, uint64_t m,
                                          size_t trials, uint64_t seed,
                                          unsigned threads, cl_experiment** out);
CL_API cl_status cl_demo_logloss_nonconcentration(size_t n, uint64_t m,
                                                  size_t trials, uint64_t seed,
                                                  unsigned threads,
                                                  cl_experiment** out);
CL_API cl_status cl_demo_linear_improperness(size_t n, uint64_t m,
                                             size_t trials, uint64_t seed,
                                             unsigned threads,
                                             cl_experiment** out);
CL_API cl_status cl_sweep_strong_properness(const cl_loss* loss, size_t n_max,
                                            size_t trials, uint64_t seed,
                                            unsigned threads,
                                            cl_experiment** out);
CL_API void cl_experiment_free(cl_experiment* e);
/* Keys: summary.mean, summary.median, summary.q05, summary.q95,
 * summary.min, summary.max, summary.failure_rate, summary.trials, plus the
 * experiment-specific stats (e.g. finite_fraction, reversal_fraction). */
CL_API cl_status cl_experiment_stat(const cl_experiment* e, const char* key,
                                    double* out);
CL_API cl_status cl_experiment_csv(const cl_experiment* e, char** out);
CL_API cl_status cl_experiment_json(const cl_experiment* e, char** out);

/* ---- verification suites ------------------------------------------------ */

typedef struct cl_verify_check {
  char name[64];
  int pass;
  double worst;
  double threshold;
  long checks;
  long violations;
} cl_verify_check;

/* Suites: strict-properness, kl-pinsker, bregman, l2-weakness, concavity,
 * coarsen-calibration, jensen-gap. Returns up to cap check rows. */
CL_API cl_status cl_verify_suite(const char* suite, size_t trials, size_t n_max,
                                 uint64_t seed, unsigned threads,
                                 cl_verify_check* checks, size_t cap,
                                 size_t* written, int* pass);
CL_API cl_status cl_verify_suite_names(char** csv_out);

/* ---- trigram experiment -------------------------------------------------- */

typedef struct cl_corpus cl_corpus;
typedef struct cl_trigram cl_trigram;

CL_API cl_status cl_corpus_load(const char* path, cl_corpus** out);
CL_API void cl_corpus_free(cl_corpus* c);
CL_API size_t cl_corpus_size(const cl_corpus* c);
/* Words dropped because they collided after normalization. */
CL_API size_t cl_corpus_dropped_duplicates(const cl_corpus* c);
CL_API cl_status cl_corpus_mix(const cl_corpus* base, const cl_corpus* noise,
                               double mass, cl_corpus** out);
/* JSON: {"losses": {name: value}, ...} for the corpus weights as "model". */
CL_API cl_status cl_corpus_eval(const cl_corpus* c, const char* losses_csv,
                                char** json_out);

CL_API cl_status cl_trigram_train(const cl_corpus* c, double alpha,
                                  double smoothing, cl_trigram** out);
CL_API void cl_trigram_free(cl_trigram* t);
CL_API cl_status cl_trigram_word_prob(const cl_trigram* t, const char* word,
                                      double* out);
CL_API cl_status cl_trigram_head_mass(const cl_trigram* t, const cl_corpus* c,
                                      double* out);
CL_API cl_status cl_trigram_corpus_mass(const cl_trigram* t, const cl_corpus* c,
                                        double* out);
/* JSON: {"losses": {...}, "head_mass": h, "corpus_mass": s}. */
CL_API cl_status cl_trigram_eval(const cl_trigram* t, const cl_corpus* c,
                                 const char* losses_csv, char** json_out);
CL_API cl_status cl_trigram_sample(const cl_trigram* t, size_t k,
                                   size_t max_len, uint64_t seed,
                                   char** newline_joined);
CL_API cl_status cl_trigram_cumcurve_csv(const cl_trigram* t,
                                         const cl_corpus* c, char** csv_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CALILOSS_H */
