// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "caliloss/losses.hpp"

namespace caliloss {

/// Word list with weights; normalization maps everything to a-z, strips
/// accents and drops other characters. Duplicates after normalization keep
/// the first occurrence.
struct corpus_entry {
  std::string word;
  double weight = 0.0;
  bool noise = false;  // set by mix_noise for injected foreign words
};

struct corpus {
  std::vector<corpus_entry> entries;  // unique words, weights sum to 1
  std::size_t dropped_duplicates = 0;

  double head_weight() const;  // total weight of non-noise words
};

/// Lowercase + accent-strip + drop non a-z. Exposed for tests.
std::string normalize_word(const std::string& raw);

/// TSV "word<TAB>frequency" reader; applies normalization, deduplication
/// and weight normalization.
corpus ingest_corpus(const std::string& path);
corpus corpus_from_entries(std::vector<std::pair<std::string, double>> entries);

/// Injects the noise words with uniform weights totalling `mass`; words
/// already in the base corpus stay with their base weight.
corpus mix_noise(const corpus& base, const corpus& noise, double mass);

/// Character trigram model over a-z plus start (^) and end ($) markers.
/// Rows of the conditional table sum to one, so word probabilities form a
/// subdistribution over all finite strings.
class trigram_model {
public:
  static constexpr std::size_t kAlphabet = 26;   // a-z
  static constexpr std::size_t kContexts = 27 * 27;  // previous two of {a-z, ^}
  static constexpr std::size_t kNext = 27;       // {a-z, $}

  /// P(word): the product of conditionals along the word plus the end
  /// symbol. Zero when a needed trigram was never seen (unsmoothed model).
  double word_probability(const std::string& word) const;

  std::string sample_word(splitmix64& gen, std::size_t max_len) const;

  double conditional(std::size_t context, std::size_t next) const {
    return table_[context * kNext + next];
  }

  double smoothing() const { return smoothing_; }

  friend trigram_model train_trigram(const corpus& c, double reweight_alpha,
                                     double smoothing);

private:
  std::vector<double> table_;  // kContexts x kNext row-stochastic
  double smoothing_ = 0.0;
};

/// Trains on weights proportional to p^alpha. alpha = 1 sets conditionals
/// to their relative frequencies and is the exact expected-log-loss
/// minimizer over trigram models; larger alpha tilts toward the head.
trigram_model train_trigram(const corpus& c, double reweight_alpha,
                            double smoothing = 0.0);

struct trigram_eval_row {
  std::string loss;
  double value = 0.0;
};

/// E_{word ~ corpus}[f(1/q(word))] per requested loss.
std::vector<trigram_eval_row> evaluate_trigram(const trigram_model& model,
                                               const corpus& c,
                                               const std::vector<local_loss>& losses);

/// Same evaluation with the corpus itself as the "model": q(word) is the
/// corpus weight. Reproduces the target row of the experiment's table.
std::vector<trigram_eval_row> evaluate_corpus_as_model(
    const corpus& c, const std::vector<local_loss>& losses);

/// Total model mass on the corpus's non-noise words.
double head_mass(const trigram_model& model, const corpus& c);

/// Sum of q(word) over all corpus words; at most 1 for a subdistribution.
double corpus_model_mass(const trigram_model& model, const corpus& c);

std::vector<std::string> sample_words(const trigram_model& model, std::size_t k,
                                      std::size_t max_len, std::uint64_t seed);

/// (rank, cumulative target mass, cumulative model mass) rows with words
/// ordered by decreasing target weight; plot-ready.
struct cumulative_point {
  std::size_t rank = 0;
  double p_cum = 0.0;
  double q_cum = 0.0;
};
std::vector<cumulative_point> cumulative_mass_curve(const trigram_model& model,
                                                    const corpus& c);

}  // namespace caliloss
