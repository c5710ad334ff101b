// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "caliloss/calibrate.hpp"
#include "caliloss/distribution.hpp"
#include "caliloss/harness.hpp"

namespace caliloss {

/// Reads either JSON {"labels": [...]?, "probs": [...]} or TSV
/// "label<TAB>probability" lines, dispatching on the file content, and
/// validates the result.
distribution read_distribution(const std::string& path);

void write_distribution_json(const distribution& d, const std::string& path);
void write_distribution_tsv(const distribution& d, const std::string& path);

/// Comma-separated, '.' decimal, header row, LF endings, full precision
/// (%.17g) so re-reading reproduces the values bit-for-bit.
std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows,
                       const std::string& comment = "");

std::string format_double(double v);

std::string experiment_csv(const experiment_result& result);
std::string experiment_json(const experiment_result& result);

std::string trace_json(const construction_trace& trace);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace caliloss
