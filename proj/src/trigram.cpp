// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#include "caliloss/trigram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace caliloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Latin-1 / Latin Extended-A letters mapped to bare ASCII. Input text is
// UTF-8; anything unmapped and outside a-z is dropped.
char strip_accent(std::uint32_t cp) {
  if (cp >= 0xC0 && cp <= 0xC5) return 'a';
  if (cp == 0xC7) return 'c';
  if (cp >= 0xC8 && cp <= 0xCB) return 'e';
  if (cp >= 0xCC && cp <= 0xCF) return 'i';
  if (cp == 0xD1) return 'n';
  if ((cp >= 0xD2 && cp <= 0xD6) || cp == 0xD8) return 'o';
  if (cp >= 0xD9 && cp <= 0xDC) return 'u';
  if (cp == 0xDD) return 'y';
  if (cp >= 0xE0 && cp <= 0xE5) return 'a';
  if (cp == 0xE7) return 'c';
  if (cp >= 0xE8 && cp <= 0xEB) return 'e';
  if (cp >= 0xEC && cp <= 0xEF) return 'i';
  if (cp == 0xF1) return 'n';
  if ((cp >= 0xF2 && cp <= 0xF6) || cp == 0xF8) return 'o';
  if (cp >= 0xF9 && cp <= 0xFC) return 'u';
  if (cp == 0xFD || cp == 0xFF) return 'y';
  if (cp >= 0x100 && cp <= 0x105) return 'a';
  if (cp >= 0x106 && cp <= 0x10D) return 'c';
  if (cp >= 0x10E && cp <= 0x111) return 'd';
  if (cp >= 0x112 && cp <= 0x11B) return 'e';
  if (cp >= 0x11C && cp <= 0x123) return 'g';
  if (cp >= 0x128 && cp <= 0x131) return 'i';
  if (cp >= 0x139 && cp <= 0x142) return 'l';
  if (cp >= 0x143 && cp <= 0x14B) return 'n';
  if (cp >= 0x14C && cp <= 0x153) return 'o';
  if (cp >= 0x154 && cp <= 0x159) return 'r';
  if (cp >= 0x15A && cp <= 0x161) return 's';
  if (cp >= 0x162 && cp <= 0x167) return 't';
  if (cp >= 0x168 && cp <= 0x173) return 'u';
  if (cp >= 0x179 && cp <= 0x17E) return 'z';
  return 0;
}

std::size_t context_symbol(char c) {  // {a-z, ^} -> 0..26
  return c == '^' ? 26 : static_cast<std::size_t>(c - 'a');
}

std::size_t next_symbol(char c) {  // {a-z, $} -> 0..26
  return c == '$' ? 26 : static_cast<std::size_t>(c - 'a');
}

std::size_t context_id(char c2, char c1) {
  return context_symbol(c2) * 27 + context_symbol(c1);
}

}  // namespace

std::string normalize_word(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    const unsigned char byte = static_cast<unsigned char>(raw[i]);
    std::uint32_t cp = 0;
    std::size_t len = 1;
    if (byte < 0x80) {
      cp = byte;
    } else if ((byte >> 5) == 0x6 && i + 1 < raw.size()) {
      cp = (byte & 0x1F) << 6 | (static_cast<unsigned char>(raw[i + 1]) & 0x3F);
      len = 2;
    } else if ((byte >> 4) == 0xE && i + 2 < raw.size()) {
      cp = (byte & 0x0F) << 12 |
           (static_cast<unsigned char>(raw[i + 1]) & 0x3F) << 6 |
           (static_cast<unsigned char>(raw[i + 2]) & 0x3F);
      len = 3;
    } else {
      ++i;
      continue;  // malformed or 4-byte sequence: drop
    }
    i += len;
    if (cp >= 'A' && cp <= 'Z') cp = cp - 'A' + 'a';
    if (cp >= 'a' && cp <= 'z') {
      out.push_back(static_cast<char>(cp));
      continue;
    }
    if (cp >= 0x300 && cp <= 0x36F) continue;  // combining marks
    const char base = strip_accent(cp);
    if (base != 0) out.push_back(base);
    // everything else (digits, punctuation, spaces) is dropped
  }
  return out;
}

corpus corpus_from_entries(std::vector<std::pair<std::string, double>> entries) {
  corpus c;
  std::unordered_set<std::string> seen;
  double total = 0.0;
  for (auto& [raw, weight] : entries) {
    if (!(weight > 0.0)) {
      raise(errc::bad_line, "non-positive weight for word: " + raw);
    }
    const std::string word = normalize_word(raw);
    if (word.empty()) continue;
    if (!seen.insert(word).second) {
      c.dropped_duplicates += 1;
      continue;
    }
    c.entries.push_back({word, weight, false});
    total += weight;
  }
  if (c.entries.empty()) raise(errc::empty_corpus, "no usable words");
  for (auto& e : c.entries) e.weight /= total;
  return c;
}

corpus ingest_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open corpus file: " + path);
  std::vector<std::pair<std::string, double>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected word<TAB>frequency";
      raise(errc::bad_line, os.str());
    }
    const std::string word = line.substr(0, tab);
    double weight = 0.0;
    try {
      weight = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      std::ostringstream os;
      os << path << ":" << lineno << ": bad frequency value";
      raise(errc::bad_line, os.str());
    }
    raw.emplace_back(word, weight);
  }
  return corpus_from_entries(std::move(raw));
}

double corpus::head_weight() const {
  double total = 0.0;
  for (const auto& e : entries) {
    if (!e.noise) total += e.weight;
  }
  return total;
}

corpus mix_noise(const corpus& base, const corpus& noise, double mass) {
  if (!(mass > 0.0 && mass < 1.0)) {
    raise(errc::parameter_out_of_range, "noise mass must lie in (0, 1)");
  }
  std::unordered_set<std::string> base_words;
  for (const auto& e : base.entries) base_words.insert(e.word);
  std::vector<std::string> fresh;
  for (const auto& e : noise.entries) {
    if (base_words.insert(e.word).second) fresh.push_back(e.word);
  }
  if (fresh.empty()) raise(errc::empty_corpus, "every noise word collides with the base corpus");

  corpus mixed;
  mixed.dropped_duplicates = noise.entries.size() - fresh.size();
  for (const auto& e : base.entries) {
    mixed.entries.push_back({e.word, e.weight * (1.0 - mass), e.noise});
  }
  const double each = mass / static_cast<double>(fresh.size());
  for (const auto& w : fresh) mixed.entries.push_back({w, each, true});
  return mixed;
}

trigram_model train_trigram(const corpus& c, double reweight_alpha,
                            double smoothing) {
  if (!(reweight_alpha > 0.0)) {
    raise(errc::parameter_out_of_range, "reweight exponent must be positive");
  }
  if (smoothing < 0.0) raise(errc::parameter_out_of_range, "smoothing must be >= 0");
  if (c.entries.empty()) raise(errc::empty_corpus, "empty corpus");

  // Reweighted word distribution p-bar proportional to p^alpha.
  std::vector<double> bar(c.entries.size());
  double total = 0.0;
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    bar[i] = std::pow(c.entries[i].weight, reweight_alpha);
    total += bar[i];
  }
  for (double& v : bar) v /= total;

  std::vector<double> counts(trigram_model::kContexts * trigram_model::kNext, 0.0);
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const std::string& word = c.entries[i].word;
    char c2 = '^', c1 = '^';
    for (char ch : word) {
      counts[context_id(c2, c1) * trigram_model::kNext + next_symbol(ch)] += bar[i];
      c2 = c1;
      c1 = ch;
    }
    counts[context_id(c2, c1) * trigram_model::kNext + next_symbol('$')] += bar[i];
  }

  trigram_model model;
  model.smoothing_ = smoothing;
  model.table_.assign(counts.size(), 0.0);
  for (std::size_t ctx = 0; ctx < trigram_model::kContexts; ++ctx) {
    double row = 0.0;
    for (std::size_t nx = 0; nx < trigram_model::kNext; ++nx) {
      row += counts[ctx * trigram_model::kNext + nx] + smoothing;
    }
    if (row == 0.0) continue;  // unseen context; all-zero row
    for (std::size_t nx = 0; nx < trigram_model::kNext; ++nx) {
      model.table_[ctx * trigram_model::kNext + nx] =
          (counts[ctx * trigram_model::kNext + nx] + smoothing) / row;
    }
  }
  return model;
}

double trigram_model::word_probability(const std::string& word) const {
  double prob = 1.0;
  char c2 = '^', c1 = '^';
  for (char ch : word) {
    if (ch < 'a' || ch > 'z') raise(errc::alphabet_mismatch, "word contains non a-z character");
    prob *= conditional(context_id(c2, c1), next_symbol(ch));
    if (prob == 0.0) return 0.0;
    c2 = c1;
    c1 = ch;
  }
  return prob * conditional(context_id(c2, c1), next_symbol('$'));
}

std::string trigram_model::sample_word(splitmix64& gen, std::size_t max_len) const {
  std::string word;
  char c2 = '^', c1 = '^';
  while (word.size() < max_len) {
    const std::size_t ctx = context_id(c2, c1);
    const double u = gen.next_double();
    double acc = 0.0;
    std::size_t pick = kNext - 1;
    for (std::size_t nx = 0; nx < kNext; ++nx) {
      acc += conditional(ctx, nx);
      if (u < acc) {
        pick = nx;
        break;
      }
    }
    if (pick == 26) break;  // end symbol
    const char ch = static_cast<char>('a' + pick);
    word.push_back(ch);
    c2 = c1;
    c1 = ch;
  }
  return word;
}

std::vector<trigram_eval_row> evaluate_trigram(const trigram_model& model,
                                               const corpus& c,
                                               const std::vector<local_loss>& losses) {
  std::vector<trigram_eval_row> rows;
  rows.reserve(losses.size());
  for (const local_loss& loss : losses) {
    double total = 0.0;
    for (const auto& e : c.entries) {
      const double q = model.word_probability(e.word);
      const double v = loss_value_at(loss, q);
      if (v == kInf) {
        total = kInf;
        break;
      }
      total += e.weight * v;
    }
    rows.push_back({loss.name, total});
  }
  return rows;
}

std::vector<trigram_eval_row> evaluate_corpus_as_model(
    const corpus& c, const std::vector<local_loss>& losses) {
  std::vector<trigram_eval_row> rows;
  rows.reserve(losses.size());
  for (const local_loss& loss : losses) {
    double total = 0.0;
    for (const auto& e : c.entries) {
      const double v = loss_value_at(loss, e.weight);
      if (v == kInf) {
        total = kInf;
        break;
      }
      total += e.weight * v;
    }
    rows.push_back({loss.name, total});
  }
  return rows;
}

double head_mass(const trigram_model& model, const corpus& c) {
  double total = 0.0;
  for (const auto& e : c.entries) {
    if (!e.noise) total += model.word_probability(e.word);
  }
  return total;
}

double corpus_model_mass(const trigram_model& model, const corpus& c) {
  double total = 0.0;
  for (const auto& e : c.entries) total += model.word_probability(e.word);
  return total;
}

std::vector<std::string> sample_words(const trigram_model& model, std::size_t k,
                                      std::size_t max_len, std::uint64_t seed) {
  std::vector<std::string> out;
  out.reserve(k);
  splitmix64 gen(seed);
  for (std::size_t i = 0; i < k; ++i) out.push_back(model.sample_word(gen, max_len));
  return out;
}

std::vector<cumulative_point> cumulative_mass_curve(const trigram_model& model,
                                                    const corpus& c) {
  std::vector<std::size_t> order(c.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return c.entries[a].weight > c.entries[b].weight;
  });
  std::vector<cumulative_point> curve;
  curve.reserve(order.size());
  double p_cum = 0.0, q_cum = 0.0;
  std::size_t rank = 0;
  for (std::size_t i : order) {
    p_cum += c.entries[i].weight;
    q_cum += model.word_probability(c.entries[i].word);
    curve.push_back({++rank, p_cum, q_cum});
  }
  return curve;
}

}  // namespace caliloss
