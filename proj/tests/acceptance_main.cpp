// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "caliloss/calibrate.hpp"
#include "caliloss/harness.hpp"
#include "caliloss/scoring.hpp"
#include "caliloss/trigram.hpp"
#include "caliloss/verify.hpp"

using namespace caliloss;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

distribution zipf(std::size_t n) {
  std::vector<double> raw(n);
  double total = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    raw[x] = 1.0 / static_cast<double>(x + 1);
    total += raw[x];
  }
  for (double& v : raw) v /= total;
  return make_distribution(raw);
}

distribution pair_coarsening(const distribution& p) {
  std::vector<double> q(p.size());
  for (std::size_t x = 0; x + 1 < p.size(); x += 2) {
    const double avg = (p.at(x) + p.at(x + 1)) / 2.0;
    q[x] = avg;
    q[x + 1] = avg;
  }
  if (p.size() % 2 == 1) q[p.size() - 1] = p.at(p.size() - 1);
  return make_distribution(std::move(q));
}

const verify::check_outcome& find_check(const verify::suite_result& suite,
                                        const std::string& name) {
  for (const auto& c : suite.checks) {
    if (c.name == name) return c;
  }
  std::fprintf(stderr, "missing check %s\n", name.c_str());
  std::exit(2);
}

void criteria_1_2_4_5(std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const verify::suite_result sweep = verify::properness_sweep(200, 2, 8, seed);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const auto& gap = find_check(sweep, "calibrated-properness-gap");
  const auto& strict = find_check(sweep, "strictness-off-target");
  report(1, "strict calibrated properness",
         gap.pass && strict.pass && elapsed < 60.0,
         fmt("min gap=%.3e (>= -1e-9), min strict gap=%.3e (> 1e-12), "
             "%zu+%zu checks, %.1fs",
             gap.worst, strict.worst, gap.checks, strict.checks, elapsed));

  const auto& thm2 = find_check(sweep, "strong-properness-thm2");
  report(2, "strong properness bound",
         thm2.pass, fmt("min slack=%.3e (>= -1e-9), violations=%zu", thm2.worst,
                        thm2.violations));

  const auto& lemma1 = find_check(sweep, "conditional-inverse-mean");
  report(4, "conditional inverse mean identity", lemma1.pass,
         fmt("worst |error|=%.3e (<= 1e-9)", -lemma1.worst));

  const auto& mass = find_check(sweep, "calibrated-mass-bound");
  report(5, "calibrated mass lower bound", mass.pass,
         fmt("min q_x - p_x/N=%.3e (>= -1e-12), equality witnessed", mass.worst));
}

void criterion_3(std::uint64_t seed) {
  const verify::suite_result suite = verify::kl_pinsker(10000, 64, seed);
  const auto& identity = find_check(suite, "log-gap-equals-kl");
  const auto& pinsker = find_check(suite, "pinsker");
  report(3, "KL identity and Pinsker", identity.pass && pinsker.pass,
         fmt("worst |gap-KL|=%.3e (<= 1e-9), min KL - l1^2/2=%.3e (>= 0), "
             "%zu pairs",
             -identity.worst, pinsker.worst, identity.checks));
}

void criterion_6(std::uint64_t seed) {
  const verify::suite_result suite = verify::bregman(10000, 64, seed);
  const auto& agree = find_check(suite, "generator-vs-direct");
  const auto& quad = find_check(suite, "quadratic-exact-l2");
  const auto& invroot = find_check(suite, "invroot-l1-strong");
  report(6, "Bregman machinery", agree.pass && quad.pass && invroot.pass,
         fmt("worst agreement=%.3e (<= 1e-9), worst quad=%.3e (<= 1e-12), "
             "min invroot slack=%.3e (>= 0)",
             -agree.worst, -quad.worst, invroot.worst));
}

void criterion_7() {
  const verify::suite_result suite = verify::l2_weakness(2048);
  const auto& gap = find_check(suite, "gap-times-n-equals-2");
  const auto& dist = find_check(suite, "l1-distance-equals-2");
  report(7, "l2 strong-properness weakness", gap.pass && dist.pass,
         fmt("worst |gap*N - 2|=%.3e (<= 1e-12) over even N in [2, 2048]",
             -gap.worst));
}

void criterion_8(std::uint64_t seed) {
  const experiment_result r = demo_logloss_nonconcentration(10000, 100, 1000, seed);
  const double expected = r.stats.at("expected_fraction");
  const double measured = r.stats.at("finite_fraction");
  const double sigma = std::sqrt(expected * (1.0 - expected) / 1000.0);
  const bool pass = std::abs(measured - expected) <= 3.0 * sigma;
  report(8, "log-loss non-concentration demo", pass,
         fmt("finite fraction=%.4f vs (1-1/N)^m=%.4f, 3 sigma=%.4f", measured,
             expected, 3.0 * sigma));
}

void criterion_9(std::uint64_t seed) {
  const experiment_result r = demo_linear_loss_improperness(10000, 100, 1000, seed);
  const bool calibrated = r.stats.at("construction_calibrated") == 1.0;
  const double fraction = r.stats.at("reversal_fraction");
  const bool pass = calibrated && fraction >= 0.10;
  report(9, "linear-loss sample-improperness demo", pass,
         fmt("construction calibrated=%d (tol 1e-12), reversal fraction=%.4f "
             "(required >= 0.10)",
             calibrated ? 1 : 0, fraction));
}

void criterion_10(std::uint64_t seed) {
  const local_loss ll = make_loglog_loss();
  const bound_report bound = concentration_bound(ll, 0.1, 0.05, 1e6, 1.0);
  const bool non_vacuous = !bound.vacuous;
  const std::uint64_t m =
      static_cast<std::uint64_t>(std::ceil(std::exp(bound.ln_m)));

  const distribution p = zipf(1000000);
  const distribution q = pair_coarsening(p);
  const experiment_result conc = run_concentration(ll, p, q, m, 1000, 0.1, seed);
  const bool concentrates = conc.summary.failure_rate <= 0.05;

  // Median deviation slope across m in {1e2, 1e3, 1e4} on log-log axes.
  std::vector<double> lm, lmed;
  for (std::uint64_t mm : {100ULL, 1000ULL, 10000ULL}) {
    const experiment_result r =
        run_concentration(ll, p, q, mm, 501, 1.0, seed + 17);
    lm.push_back(std::log(static_cast<double>(mm)));
    lmed.push_back(std::log(r.summary.median));
  }
  const double mx = (lm[0] + lm[1] + lm[2]) / 3.0;
  const double my = (lmed[0] + lmed[1] + lmed[2]) / 3.0;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i) {
    num += (lm[i] - mx) * (lmed[i] - my);
    den += (lm[i] - mx) * (lm[i] - mx);
  }
  const double slope = num / den;
  const bool slope_ok = slope >= -0.6 && slope <= -0.4;

  report(10, "concentration at the theorem sample count",
         non_vacuous && concentrates && slope_ok,
         fmt("m=%llu (<= N=1e6, c1=1), failure rate=%.4f (<= 0.05), "
             "median-deviation slope=%.3f (in [-0.6, -0.4])",
             static_cast<unsigned long long>(m), conc.summary.failure_rate,
             slope));
}

void criterion_11(std::uint64_t seed) {
  const std::size_t runs = 200;
  const approx_calibration_params params{0.3, 0.1, 0.1};
  const double multiplier = 1e-7;  // exposed sample-multiplier knob
  const distribution p = zipf(1000);
  const sampler src(p);

  std::vector<std::uint8_t> failed(runs, 0);
  std::vector<double> distances(runs, 0.0);
  std::uint64_t samples_used = 0;
  parallel_for_trials(runs, 0, [&](std::size_t r) {
    splitmix64 gen(derive_stream(seed, r));
    const std::size_t blocks = 4 + gen.next_u64() % 60;
    std::vector<std::vector<std::size_t>> partition(blocks);
    for (std::size_t x = 0; x < p.size(); ++x) {
      partition[gen.next_u64() % blocks].push_back(x);
    }
    std::erase_if(partition, [](const auto& b) { return b.empty(); });
    const distribution q = coarsen(p, partition);
    auto [qprime, trace] =
        make_approx_calibrated(q, src, params, derive_stream(seed ^ 0xabcd, r),
                               multiplier);
    failed[r] = is_approx_calibrated(qprime, p, params).passes ? 0 : 1;
    distances[r] = l1_distance(q, qprime);
    if (r == 0) samples_used = trace.samples_used;
  });

  std::size_t failures = 0;
  for (std::uint8_t f : failed) failures += f;
  const double failure_fraction =
      static_cast<double>(failures) / static_cast<double>(runs);
  const double budget =
      params.delta + 3.0 * std::sqrt(params.delta / static_cast<double>(runs));
  std::sort(distances.begin(), distances.end());
  const double median_distance = distances[runs / 2];
  const double distance_cap = 5.0 * (params.alpha1 + params.alpha2);
  const double empirical_k = median_distance / (params.alpha1 + params.alpha2);

  report(11, "approximate-calibration construction",
         failure_fraction <= budget && median_distance <= distance_cap,
         fmt("failure fraction=%.3f (<= %.3f), median ||q-q'||_1=%.4f "
             "(<= %.1f, empirical K=%.3f), m/run=%llu (multiplier %.0e)",
             failure_fraction, budget, median_distance, distance_cap,
             empirical_k, static_cast<unsigned long long>(samples_used),
             multiplier));
}

void criterion_12() {
  const std::string english = std::string(CALILOSS_DATA_DIR) + "/english_mini.tsv";
  const std::string foreign = std::string(CALILOSS_DATA_DIR) + "/foreign_mini.tsv";
  const corpus mixed =
      mix_noise(ingest_corpus(english), ingest_corpus(foreign), 0.12);
  const std::vector<local_loss> losses = {make_log_loss(), make_loglog_loss()};

  const trigram_model q1 = train_trigram(mixed, 1.0, 0.0);
  const trigram_model q2 = train_trigram(mixed, 1.4, 0.0);
  const auto rows1 = evaluate_trigram(q1, mixed, losses);
  const auto rows2 = evaluate_trigram(q2, mixed, losses);
  const double log1 = rows1[0].value, loglog1 = rows1[1].value;
  const double log2 = rows2[0].value, loglog2 = rows2[1].value;
  const double head1 = head_mass(q1, mixed);
  const double head2 = head_mass(q2, mixed);

  bool band_ok = true;
  for (double alpha : {1.3, 1.6, 2.0}) {
    const trigram_model qa = train_trigram(mixed, alpha, 0.0);
    const auto rows = evaluate_trigram(qa, mixed, losses);
    band_ok = band_ok && rows[1].value <= loglog1 &&
              head_mass(qa, mixed) > head1 && rows[0].value >= log1 - 1e-12;
  }
  const bool subdist = corpus_model_mass(q1, mixed) <= 1.0 + 1e-9 &&
                       corpus_model_mass(q2, mixed) <= 1.0 + 1e-9;

  const bool pass = log1 <= log2 && loglog2 <= loglog1 && head2 > head1 &&
                    band_ok && subdist;
  report(12, "trigram head-vs-tail experiment", pass,
         fmt("log: q1=%.4f <= q2=%.4f; loglog: q2=%.4f <= q1=%.4f; head: "
             "q2=%.4f > q1=%.4f; alpha in {1.3,1.6,2.0} band=%d",
             log1, log2, loglog2, loglog1, head2, head1, band_ok ? 1 : 0));
}

void criterion_13() {
  const verify::suite_result suite = verify::concavity(400);
  const auto& slack = find_check(suite, "left-strong-concavity");
  const auto& meta = find_check(suite, "metadata-invariants");
  report(13, "concavity metadata certificates", slack.pass && meta.pass,
         fmt("max f''(z) + C(z)/z^2 = %.3e (<= 1e-9) on 400-point grids",
             -slack.worst));
}

}  // namespace

int main() {
  const std::uint64_t seed = 20260810;
  std::printf("caliloss acceptance suite (seed %llu)\n",
              static_cast<unsigned long long>(seed));

  criteria_1_2_4_5(seed);
  criterion_3(seed + 1);
  criterion_6(seed + 2);
  criterion_7();
  criterion_8(seed + 3);
  criterion_9(seed + 4);
  criterion_10(seed + 5);
  criterion_11(seed + 6);
  criterion_12();
  criterion_13();

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
