// Copyright 2026 The caliloss authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace caliloss {

enum class errc {
  ok = 0,
  negative_probability,
  sum_out_of_tolerance,
  domain_mismatch,
  domain_too_large,
  invalid_partition,
  zero_mass_bucket,
  missing_rate,
  growth_envelope_too_fast,
  unsupported_loss,
  parameter_out_of_range,
  insufficient_samples,
  degenerate_input,
  invalid_shape,
  undefined_gradient,
  odd_domain,
  empty_corpus,
  bad_line,
  alphabet_mismatch,
  io_error,
  parse_error,
  internal,
};

const char* errc_name(errc c);

/// Exception carrying a stable error code alongside the message.
class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace caliloss
