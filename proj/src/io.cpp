// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#include "caliloss/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace caliloss {

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

distribution read_distribution(const std::string& path) {
  const std::string text = slurp(path);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) raise(errc::parse_error, "empty distribution file: " + path);

  std::vector<double> probs;
  domain dom;
  if (text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const std::exception& e) {
      raise(errc::parse_error, std::string("bad JSON: ") + e.what());
    }
    if (!doc.contains("probs") || !doc["probs"].is_array()) {
      raise(errc::parse_error, "JSON distribution needs a \"probs\" array");
    }
    for (const auto& v : doc["probs"]) probs.push_back(v.get<double>());
    if (doc.contains("labels")) {
      for (const auto& v : doc["labels"]) dom.labels.push_back(v.get<std::string>());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const std::size_t tab = line.find('\t');
      if (tab == std::string::npos) {
        std::ostringstream os;
        os << path << ":" << lineno << ": expected label<TAB>probability";
        raise(errc::parse_error, os.str());
      }
      dom.labels.push_back(line.substr(0, tab));
      try {
        probs.push_back(std::stod(line.substr(tab + 1)));
      } catch (const std::exception&) {
        std::ostringstream os;
        os << path << ":" << lineno << ": bad probability value";
        raise(errc::parse_error, os.str());
      }
    }
  }
  dom.size = probs.size();
  return validate_distribution(std::move(probs), std::move(dom));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot write file: " + path);
  out << content;
  if (!out) raise(errc::io_error, "write failed: " + path);
}

void write_distribution_json(const distribution& d, const std::string& path) {
  json doc;
  if (!d.dom().labels.empty()) doc["labels"] = d.dom().labels;
  doc["probs"] = d.probs();
  write_text_file(path, doc.dump(2) + "\n");
}

void write_distribution_tsv(const distribution& d, const std::string& path) {
  std::ostringstream os;
  for (std::size_t x = 0; x < d.size(); ++x) {
    const std::string label = d.dom().labels.empty()
                                  ? "x" + std::to_string(x)
                                  : d.dom().labels[x];
    os << label << '\t' << format_double(d.at(x)) << '\n';
  }
  write_text_file(path, os.str());
}

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows,
                       const std::string& comment) {
  std::ostringstream os;
  if (!comment.empty()) os << "# " << comment << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) {
    os << (i ? "," : "") << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << row[i];
    }
    os << '\n';
  }
  return os.str();
}

std::string experiment_csv(const experiment_result& result) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(result.per_trial.size() + 1);
  for (std::size_t t = 0; t < result.per_trial.size(); ++t) {
    rows.push_back({"trial", std::to_string(t), format_double(result.per_trial[t]),
                    result.per_trial_flag.empty()
                        ? ""
                        : std::to_string(static_cast<int>(result.per_trial_flag[t]))});
  }
  rows.push_back({"summary", "", format_double(result.summary.mean), ""});
  return format_csv({"row", "trial", "value", "flag"}, rows,
                    result.kind + " seed=" + std::to_string(result.seed));
}

std::string experiment_json(const experiment_result& result) {
  json doc;
  doc["kind"] = result.kind;
  doc["seed"] = result.seed;
  json config;
  for (const auto& [k, v] : result.config) config[k] = number_or_string(v);
  doc["config"] = config;
  json summary;
  summary["trials"] = result.summary.trials;
  summary["mean"] = number_or_string(result.summary.mean);
  summary["median"] = number_or_string(result.summary.median);
  summary["q05"] = number_or_string(result.summary.q05);
  summary["q95"] = number_or_string(result.summary.q95);
  summary["min"] = number_or_string(result.summary.min);
  summary["max"] = number_or_string(result.summary.max);
  summary["failure_rate"] = result.summary.failure_rate;
  doc["summary"] = summary;
  json stats;
  for (const auto& [k, v] : result.stats) stats[k] = number_or_string(v);
  doc["stats"] = stats;
  json rows = json::array();
  for (std::size_t t = 0; t < result.per_trial.size(); ++t) {
    json row;
    row["trial"] = t;
    row["value"] = number_or_string(result.per_trial[t]);
    if (!result.per_trial_flag.empty()) row["flag"] = result.per_trial_flag[t] != 0;
    rows.push_back(row);
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

std::string trace_json(const construction_trace& trace) {
  json doc;
  doc["gamma1"] = trace.gamma1;
  doc["bucket_count"] = trace.bucket_count;
  doc["width"] = trace.width;
  doc["estimate_accuracy"] = trace.estimate_accuracy;
  doc["low_mass_threshold"] = trace.low_mass_threshold;
  doc["samples_required"] = trace.samples_required;
  doc["samples_used"] = trace.samples_used;
  doc["sample_multiplier"] = trace.sample_multiplier;
  doc["w_norm"] = trace.w_norm;
  doc["low_mass_reassigned"] = trace.low_mass_reassigned;
  json buckets = json::array();
  for (const auto& rec : trace.occupied) {
    json b;
    b["index"] = rec.index;
    b["lower"] = rec.lower;
    b["upper"] = rec.upper;
    b["elements"] = rec.elements;
    b["estimate"] = rec.estimate;
    b["class"] = rec.low_mass ? "L" : "H";
    buckets.push_back(b);
  }
  doc["occupied_buckets"] = buckets;
  return doc.dump(2) + "\n";
}

}  // namespace caliloss
