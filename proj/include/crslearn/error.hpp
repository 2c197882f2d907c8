// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace crslearn {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  unsupported_transformation,
  degenerate_space,
  inconsistent_space,
  degenerate_labels,
  insufficient_samples,
  io_error,
  format_error,
};

/// Single exception type for the library; the code mirrors the
/// per-operation error contracts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::unsupported_transformation: return "unsupported-transformation";
    case ErrorCode::degenerate_space: return "degenerate-space";
    case ErrorCode::inconsistent_space: return "inconsistent-space";
    case ErrorCode::degenerate_labels: return "degenerate-labels";
    case ErrorCode::insufficient_samples: return "insufficient-samples";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::format_error: return "format-error";
  }
  return "unknown";
}

}  // namespace crslearn
