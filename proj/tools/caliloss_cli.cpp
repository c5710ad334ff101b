// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Links the shared library's C API only.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "caliloss.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitIo = 3;

int exit_code_for(cl_status status) {
  switch (status) {
    case CL_ERR_IO:
    case CL_ERR_PARSE:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

void check(cl_status status) {
  if (status == CL_OK) return;
  std::fprintf(stderr, "error: %s: %s\n", cl_status_name(status), cl_last_error());
  std::exit(exit_code_for(status));
}

std::string owned(char* s) {
  std::string out = s ? s : "";
  cl_string_free(s);
  return out;
}

std::string timestamp() {
  char buf[64];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::fputs(content.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    std::exit(kExitIo);
  }
  f << content;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

struct dist_handle {
  cl_dist* d = nullptr;
  ~dist_handle() { cl_dist_free(d); }
};

struct loss_handle {
  cl_loss* l = nullptr;
  explicit loss_handle(const std::string& name) { check(cl_loss_open(name.c_str(), &l)); }
  ~loss_handle() { cl_loss_free(l); }
};

void load_dist(const std::string& path, dist_handle* out) {
  check(cl_dist_read(path.c_str(), &out->d));
}

// ---- bounds ---------------------------------------------------------------

int run_bounds(const std::string& losses_csv, const std::string& kinds_csv,
               double n, double eps, double gamma, double delta, double alpha1,
               double alpha2, double c1, std::uint64_t seed,
               const std::string& out_path) {
  std::ostringstream os;
  os << "# caliloss bounds seed=" << seed << " generated=" << timestamp() << "\n";
  os << "kind,loss,N,eps,gamma,delta,alpha1,alpha2,ln_beta,ln_m,gap,vacuous\n";
  for (const std::string& loss_name : split_csv(losses_csv)) {
    loss_handle loss(loss_name);
    for (const std::string& kind : split_csv(kinds_csv)) {
      cl_bound_report r{};
      r.ln_beta = r.ln_m = r.gap = std::nan("");
      if (kind == "strong-proper") {
        check(cl_bound_strong_gap(loss.l, n, eps, &r.gap));
        r.gap_positive = r.gap > 0.0;
      } else if (kind == "concentration") {
        check(cl_bound_concentration(loss.l, gamma, delta, n, c1, &r));
      } else if (kind == "sample-proper") {
        check(cl_bound_sample_proper(loss.l, eps, delta, n, c1, &r));
      } else if (kind == "approx-strong-proper") {
        check(cl_bound_approx_strong(loss.l, n, eps, alpha1, alpha2, &r));
      } else if (kind == "approx-concentration") {
        check(cl_bound_approx_concentration(loss.l, n, gamma, delta, alpha1,
                                            alpha2, c1, &r));
      } else if (kind == "approx-sample-proper") {
        check(cl_bound_approx_sample(loss.l, n, eps, delta, alpha1, alpha2, c1,
                                     &r));
      } else {
        std::fprintf(stderr, "error: unknown bound kind %s\n", kind.c_str());
        return kExitUsage;
      }
      os << kind << ',' << loss_name << ',' << fmt_double(n) << ','
         << fmt_double(eps) << ',' << fmt_double(gamma) << ','
         << fmt_double(delta) << ',' << fmt_double(alpha1) << ','
         << fmt_double(alpha2) << ',' << fmt_double(r.ln_beta) << ','
         << fmt_double(r.ln_m) << ',' << fmt_double(r.gap) << ','
         << (r.vacuous ? 1 : 0) << "\n";
    }
  }
  emit(out_path, os.str());
  return 0;
}

// ---- verify ----------------------------------------------------------------

int run_verify(const std::string& suites_csv, std::size_t trials, std::size_t n,
               std::uint64_t seed, unsigned threads) {
  bool all_pass = true;
  std::string first_violation;
  for (const std::string& suite : split_csv(suites_csv)) {
    cl_verify_check checks[16];
    size_t written = 0;
    int pass = 0;
    check(cl_verify_suite(suite.c_str(), trials, n, seed, threads, checks, 16,
                          &written, &pass));
    for (size_t i = 0; i < written; ++i) {
      std::printf("[%s] %s/%s worst=%.6e threshold=%.1e checks=%ld violations=%ld\n",
                  checks[i].pass ? "PASS" : "FAIL", suite.c_str(), checks[i].name,
                  checks[i].worst, checks[i].threshold, checks[i].checks,
                  checks[i].violations);
      if (!checks[i].pass && first_violation.empty()) {
        first_violation = suite + "/" + checks[i].name;
      }
    }
    all_pass = all_pass && pass == 1;
  }
  if (!all_pass) {
    std::fprintf(stderr, "verification failed: first violated invariant: %s\n",
                 first_violation.c_str());
    return kExitViolation;
  }
  return 0;
}

// ---- demos -------------------------------------------------------------------

int run_demo(const std::string& name, std::size_t n, std::uint64_t m,
             std::size_t trials, std::uint64_t seed, unsigned threads,
             const std::string& format, const std::string& out_path) {
  if (name == "l2-weakness") {
    std::ostringstream os;
    os << "# caliloss demo l2-weakness generated=" << timestamp() << "\n";
    os << "N,l1_distance,quadratic_gap,gap_times_n\n";
    bool ok = true;
    for (std::size_t k = 2; k <= n; k += 2) {
      double l1 = 0.0, gap = 0.0;
      check(cl_l2_counterexample(k, &l1, &gap));
      const double product = gap * static_cast<double>(k);
      ok = ok && std::abs(product - 2.0) <= 1e-12 && std::abs(l1 - 2.0) <= 1e-12;
      os << k << ',' << fmt_double(l1) << ',' << fmt_double(gap) << ','
         << fmt_double(product) << "\n";
    }
    emit(out_path, os.str());
    if (!ok) {
      std::fprintf(stderr, "violated invariant: quadratic gap * N == 2\n");
      return kExitViolation;
    }
    return 0;
  }

  cl_experiment* exp = nullptr;
  if (name == "logloss-nonconcentration") {
    check(cl_demo_logloss_nonconcentration(n, m, trials, seed, threads, &exp));
  } else if (name == "linear-improperness") {
    check(cl_demo_linear_improperness(n, m, trials, seed, threads, &exp));
  } else {
    std::fprintf(stderr, "error: unknown demo %s\n", name.c_str());
    return kExitUsage;
  }
  char* text = nullptr;
  check(format == "json" ? cl_experiment_json(exp, &text)
                         : cl_experiment_csv(exp, &text));
  emit(out_path, owned(text));

  int violation = 0;
  if (name == "logloss-nonconcentration") {
    double measured = 0.0, expected = 0.0, t = 0.0;
    check(cl_experiment_stat(exp, "finite_fraction", &measured));
    check(cl_experiment_stat(exp, "expected_fraction", &expected));
    check(cl_experiment_stat(exp, "summary.trials", &t));
    const double sigma = std::sqrt(expected * (1.0 - expected) / t);
    std::fprintf(stderr, "finite-empirical fraction %.4f, closed form %.4f\n",
                 measured, expected);
    if (std::abs(measured - expected) > 3.0 * sigma) {
      std::fprintf(stderr, "violated invariant: fraction within 3 sigma of closed form\n");
      violation = 1;
    }
  } else {
    double calibrated = 0.0, fraction = 0.0;
    check(cl_experiment_stat(exp, "construction_calibrated", &calibrated));
    check(cl_experiment_stat(exp, "reversal_fraction", &fraction));
    std::fprintf(stderr, "reversal fraction %.4f over %zu trials\n", fraction,
                 trials);
    if (calibrated != 1.0) {
      std::fprintf(stderr, "violated invariant: construction calibrated at 1e-12\n");
      violation = 1;
    }
  }
  cl_experiment_free(exp);
  return violation ? kExitViolation : 0;
}

// ---- harness subcommands ----------------------------------------------------

int run_harness(bool concentration, const std::string& loss_name,
                const std::string& p_path, const std::string& q_path,
                std::uint64_t m, std::size_t trials, double gamma,
                std::uint64_t seed, unsigned threads, const std::string& format,
                const std::string& out_path) {
  loss_handle loss(loss_name);
  dist_handle p, q;
  load_dist(p_path, &p);
  load_dist(q_path, &q);
  cl_experiment* exp = nullptr;
  if (concentration) {
    check(cl_run_concentration(loss.l, p.d, q.d, m, trials, gamma, seed, threads,
                               &exp));
  } else {
    check(cl_run_sample_properness(loss.l, p.d, q.d, m, trials, seed, threads,
                                   &exp));
  }
  char* text = nullptr;
  check(format == "json" ? cl_experiment_json(exp, &text)
                         : cl_experiment_csv(exp, &text));
  emit(out_path, owned(text));
  cl_experiment_free(exp);
  return 0;
}

// ---- calibrate -----------------------------------------------------------------

int run_calibrate(const std::string& q_path, const std::string& p_path,
                  double alpha1, double alpha2, double delta, std::uint64_t seed,
                  double multiplier, const std::string& out_path,
                  const std::string& trace_path) {
  dist_handle q, p;
  load_dist(q_path, &q);
  load_dist(p_path, &p);
  cl_approx_params params{alpha1, alpha2, delta};
  cl_dist* qprime = nullptr;
  char* trace = nullptr;
  check(cl_make_approx_calibrated(q.d, p.d, params, seed, multiplier, &qprime,
                                  trace_path.empty() ? nullptr : &trace));
  check(cl_dist_write_json(qprime, out_path.c_str()));
  if (!trace_path.empty()) emit(trace_path, owned(trace));

  int passes = 0;
  double witness = 0.0, worst = 0.0;
  check(cl_is_approx_calibrated(qprime, p.d, params, &passes, &witness, &worst));
  std::fprintf(stderr,
               "q' written to %s; certifier: %s (witness mass %.5f, worst "
               "under-ratio %.5f)\n",
               out_path.c_str(), passes ? "pass" : "FAIL", witness, worst);
  cl_dist_free(qprime);
  return passes ? 0 : kExitViolation;
}

// ---- scoring ---------------------------------------------------------------------

int run_scoring(const std::string& generators_csv, std::size_t trials,
                std::uint64_t seed, const std::string& out_path) {
  // Bregman agreement on random full-support pairs, via the C surface.
  std::ostringstream os;
  os << "# caliloss scoring seed=" << seed << " generated=" << timestamp() << "\n";
  os << "generator,pairs,max_identity_error,min_divergence\n";
  bool ok = true;
  // Simple deterministic xorshift-free generator from the seed.
  std::uint64_t state = seed ? seed : 0x9e3779b97f4a7c15ULL;
  auto next_unit = [&state]() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  };
  for (const std::string& name : split_csv(generators_csv)) {
    cl_generator* g = nullptr;
    check(cl_generator_open(name.c_str(), &g));
    double worst_identity = 0.0;
    double min_divergence = 1e300;
    for (std::size_t i = 0; i < trials; ++i) {
      const std::size_t n = 2 + static_cast<std::size_t>(next_unit() * 14.0);
      std::vector<double> pv(n), qv(n);
      double sp = 0.0, sq = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        pv[x] = -std::log(1.0 - next_unit()) + 1e-9;
        qv[x] = -std::log(1.0 - next_unit()) + 1e-9;
        sp += pv[x];
        sq += qv[x];
      }
      for (std::size_t x = 0; x < n; ++x) {
        pv[x] /= sp;
        qv[x] /= sq;
      }
      cl_dist *p = nullptr, *q = nullptr;
      check(cl_dist_create(pv.data(), n, &p));
      check(cl_dist_create(qv.data(), n, &q));
      double div = 0.0;
      check(cl_generator_divergence(g, p, q, &div));
      // Identity route: expected generated loss gap.
      double gap = 0.0;
      for (std::size_t x = 0; x < n; ++x) {
        double lq = 0.0, lp = 0.0;
        check(cl_generator_loss(g, q, x, &lq));
        check(cl_generator_loss(g, p, x, &lp));
        gap += pv[x] * (lq - lp);
      }
      worst_identity = std::max(worst_identity, std::abs(div - gap));
      min_divergence = std::min(min_divergence, div);
      cl_dist_free(p);
      cl_dist_free(q);
    }
    ok = ok && worst_identity <= 1e-9 && min_divergence >= -1e-12;
    os << name << ',' << trials << ',' << fmt_double(worst_identity) << ','
       << fmt_double(min_divergence) << "\n";
    cl_generator_free(g);
  }
  emit(out_path, os.str());
  if (!ok) {
    std::fprintf(stderr, "violated invariant: Bregman identity / properness\n");
    return kExitViolation;
  }
  return 0;
}

// ---- trigram -----------------------------------------------------------------------

int run_trigram(const std::string& english, const std::string& foreign,
                double noise_mass, const std::string& alphas_csv,
                const std::string& losses_csv, std::size_t samples,
                std::uint64_t seed, const std::string& out_prefix) {
  cl_corpus* base = nullptr;
  check(cl_corpus_load(english.c_str(), &base));
  if (cl_corpus_dropped_duplicates(base) > 0) {
    std::fprintf(stderr, "warning: %zu duplicate words dropped from %s\n",
                 cl_corpus_dropped_duplicates(base), english.c_str());
  }
  cl_corpus* working = base;
  cl_corpus* mixed = nullptr;
  if (!foreign.empty()) {
    cl_corpus* noise = nullptr;
    check(cl_corpus_load(foreign.c_str(), &noise));
    check(cl_corpus_mix(base, noise, noise_mass, &mixed));
    if (cl_corpus_dropped_duplicates(mixed) > 0) {
      std::fprintf(stderr, "warning: %zu noise words collided with the base corpus\n",
                   cl_corpus_dropped_duplicates(mixed));
    }
    cl_corpus_free(noise);
    working = mixed;
  }

  std::ostringstream table;
  table << "# caliloss trigram seed=" << seed << " generated=" << timestamp()
        << "\n";
  table << "model";
  for (const std::string& loss : split_csv(losses_csv)) table << ',' << loss;
  table << ",head_mass,corpus_mass\n";

  // Target row: the corpus weights themselves.
  {
    char* json = nullptr;
    check(cl_corpus_eval(working, losses_csv.c_str(), &json));
    const std::string text = owned(json);
    table << "p";
    for (const std::string& loss : split_csv(losses_csv)) {
      const std::string key = "\"" + loss + "\": ";
      const std::size_t pos = text.find(key);
      double v = std::nan("");
      if (pos != std::string::npos) v = std::stod(text.substr(pos + key.size()));
      table << ',' << fmt_double(v);
    }
    double head = 0.0;
    (void)head;
    table << ",," << "\n";
  }

  for (const std::string& alpha_text : split_csv(alphas_csv)) {
    const double alpha = std::stod(alpha_text);
    cl_trigram* model = nullptr;
    check(cl_trigram_train(working, alpha, 0.0, &model));
    double head = 0.0, mass = 0.0;
    check(cl_trigram_head_mass(model, working, &head));
    check(cl_trigram_corpus_mass(model, working, &mass));
    table << "q(alpha=" << alpha_text << ")";
    for (const std::string& loss : split_csv(losses_csv)) {
      char* json = nullptr;
      check(cl_trigram_eval(model, working, loss.c_str(), &json));
      const std::string text = owned(json);
      const std::string key = "\"" + loss + "\": ";
      const std::size_t pos = text.find(key);
      double v = std::nan("");
      if (pos != std::string::npos) {
        const std::string rest = text.substr(pos + key.size());
        v = rest.rfind("\"inf", 0) == 0 ? INFINITY : std::stod(rest);
      }
      table << ',' << fmt_double(v);
    }
    table << ',' << fmt_double(head) << ',' << fmt_double(mass) << "\n";

    char* curve = nullptr;
    check(cl_trigram_cumcurve_csv(model, working, &curve));
    emit(out_prefix + ".curve.alpha" + alpha_text + ".csv", owned(curve));

    if (samples > 0) {
      char* words = nullptr;
      check(cl_trigram_sample(model, samples, 24, seed, &words));
      emit(out_prefix + ".samples.alpha" + alpha_text + ".txt", owned(words));
    }
    cl_trigram_free(model);
  }
  emit(out_prefix.empty() ? "" : out_prefix + ".table.csv", table.str());

  if (mixed) cl_corpus_free(mixed);
  cl_corpus_free(base);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"caliloss: loss functions for calibrated distribution learning"};
  app.require_subcommand(1);

  std::uint64_t seed = 12345;
  unsigned threads = 0;
  app.add_option("--seed", seed, "root seed for all randomized subcommands");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "evaluate closed-form theorem bounds");
  std::string b_losses = "log,powlog:0.5,loglog,sqlog";
  std::string b_kinds = "strong-proper,concentration,sample-proper";
  double b_n = 1e6, b_eps = 0.5, b_gamma = 0.1, b_delta = 0.05;
  double b_a1 = 0.01, b_a2 = 0.01, b_c1 = 1.0;
  std::string b_out;
  bounds->add_option("--loss", b_losses, "comma list of losses");
  bounds->add_option("--kinds", b_kinds, "comma list of bound kinds");
  bounds->add_option("--N", b_n, "domain size");
  bounds->add_option("--eps", b_eps, "l1 distance parameter");
  bounds->add_option("--gamma", b_gamma, "concentration accuracy");
  bounds->add_option("--delta", b_delta, "failure probability");
  bounds->add_option("--alpha1", b_a1, "approximate-calibration alpha1");
  bounds->add_option("--alpha2", b_a2, "approximate-calibration alpha2");
  bounds->add_option("--c1", b_c1, "theorem constant c1");
  bounds->add_option("--out", b_out, "output CSV path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "run oracle sweeps and invariant suites");
  std::string v_suites = "strict-properness";
  std::size_t v_trials = 200, v_n = 8;
  verify->add_option("--suite", v_suites, "comma list of suites");
  verify->add_option("--trials", v_trials, "trial count");
  verify->add_option("--N", v_n, "domain-size cap");

  // demo
  auto* demo = app.add_subcommand("demo", "reproduce the counterexamples");
  std::string d_name = "logloss-nonconcentration";
  std::size_t d_n = 10000, d_trials = 1000;
  std::uint64_t d_m = 100;
  std::string d_format = "csv", d_out;
  demo->add_option("--name", d_name,
                   "logloss-nonconcentration | linear-improperness | l2-weakness");
  demo->add_option("--N", d_n, "domain size");
  demo->add_option("--m", d_m, "sample count per trial");
  demo->add_option("--trials", d_trials, "trial count");
  demo->add_option("--format", d_format, "csv | json");
  demo->add_option("--out", d_out, "output path (default stdout)");

  // concentrate / sample-proper
  auto* conc = app.add_subcommand("concentrate", "Monte Carlo concentration run");
  auto* sp = app.add_subcommand("sample-proper", "Monte Carlo sample-properness run");
  std::string h_loss = "log", h_p, h_q, h_format = "csv", h_out;
  std::uint64_t h_m = 1000;
  std::size_t h_trials = 1000;
  double h_gamma = 0.1;
  for (CLI::App* c : {conc, sp}) {
    c->add_option("--loss", h_loss, "loss name");
    c->add_option("--p", h_p, "target distribution file")->required();
    c->add_option("--q", h_q, "candidate distribution file")->required();
    c->add_option("--m", h_m, "samples per trial");
    c->add_option("--trials", h_trials, "trial count");
    c->add_option("--format", h_format, "csv | json");
    c->add_option("--out", h_out, "output path (default stdout)");
  }
  conc->add_option("--gamma", h_gamma, "deviation threshold");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "approximate-calibration construction");
  std::string c_q, c_p, c_out = "qprime.json", c_trace;
  double c_a1 = 0.3, c_a2 = 0.1, c_delta = 0.1, c_mult = 1.0;
  cal->add_option("--q", c_q, "candidate distribution file")->required();
  cal->add_option("--p", c_p, "target distribution file")->required();
  cal->add_option("--alpha1", c_a1, "multiplicative tolerance");
  cal->add_option("--alpha2", c_a2, "witness mass budget");
  cal->add_option("--delta", c_delta, "failure probability");
  cal->add_option("--sample-multiplier", c_mult,
                  "scales the explicit Chernoff sample count");
  cal->add_option("--out", c_out, "output distribution path");
  cal->add_option("--trace", c_trace, "construction trace JSON path");

  // scoring
  auto* scoring = app.add_subcommand("scoring", "Bregman divergence checks");
  std::string s_gens = "shannon,quad,invroot";
  std::size_t s_trials = 1000;
  std::string s_out;
  scoring->add_option("--generators", s_gens, "comma list of generators");
  scoring->add_option("--trials", s_trials, "random pairs per generator");
  scoring->add_option("--out", s_out, "output CSV path (default stdout)");

  // trigram
  auto* trigram = app.add_subcommand("trigram", "character-trigram experiment");
  std::string t_english = std::string(CALILOSS_DATA_DIR) + "/english_mini.tsv";
  std::string t_foreign = std::string(CALILOSS_DATA_DIR) + "/foreign_mini.tsv";
  double t_noise = 0.12;
  std::string t_alphas = "1,1.4";
  std::string t_losses = "log,loglog";
  std::size_t t_samples = 0;
  std::string t_prefix = "trigram";
  trigram->add_option("--english", t_english, "base word list (TSV)");
  trigram->add_option("--foreign", t_foreign, "noise word list (TSV; empty to skip)");
  trigram->add_option("--noise-mass", t_noise, "total noise probability mass");
  trigram->add_option("--alpha", t_alphas, "comma list of reweight exponents");
  trigram->add_option("--losses", t_losses, "comma list of losses");
  trigram->add_option("--samples", t_samples, "words to sample per model");
  trigram->add_option("--out-prefix", t_prefix, "output file prefix");

  // --seed/--threads may appear after the subcommand name.
  for (CLI::App* sub : {bounds, verify, demo, conc, sp, cal, scoring, trigram}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::fprintf(stderr, "seed=%" PRIu64 "\n", seed);

  if (bounds->parsed()) {
    return run_bounds(b_losses, b_kinds, b_n, b_eps, b_gamma, b_delta, b_a1,
                      b_a2, b_c1, seed, b_out);
  }
  if (verify->parsed()) return run_verify(v_suites, v_trials, v_n, seed, threads);
  if (demo->parsed()) {
    return run_demo(d_name, d_n, d_m, d_trials, seed, threads, d_format, d_out);
  }
  if (conc->parsed()) {
    return run_harness(true, h_loss, h_p, h_q, h_m, h_trials, h_gamma, seed,
                       threads, h_format, h_out);
  }
  if (sp->parsed()) {
    return run_harness(false, h_loss, h_p, h_q, h_m, h_trials, 0.0, seed,
                       threads, h_format, h_out);
  }
  if (cal->parsed()) {
    return run_calibrate(c_q, c_p, c_a1, c_a2, c_delta, seed, c_mult, c_out,
                         c_trace);
  }
  if (scoring->parsed()) return run_scoring(s_gens, s_trials, seed, s_out);
  if (trigram->parsed()) {
    return run_trigram(t_english, t_foreign, t_noise, t_alphas, t_losses,
                       t_samples, seed, t_prefix);
  }
  return kExitUsage;
}
