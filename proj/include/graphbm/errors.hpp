// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace graphbm {

// Stable machine-readable reason codes for validation and numerical failures.
// The CLI maps ValidationFailed-family codes to exit 2 and numerical codes to
// exit 3, so additions here need a corresponding entry in tools/graphbm_main.
enum class ErrorCode {
  // graph validation
  NonpositiveLength,
  DanglingEndpoint,
  UnsupportedLoop,
  DuplicateId,
  GraphStructure,
  // vertex-data validation
  NormalizationViolation,
  DirichletExcluded,
  NegativeCoefficient,
  KeyMismatch,
  // function validation
  FunctionInvalid,
  // numerical
  SingularSecularMatrix,
  ResidualTooLarge,
  SeriesNotConverged,
  ScanInconclusive,
  // input plumbing
  ShellTooLarge,
  ParseError,
  InvalidArgument,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonpositiveLength: return "nonpositive_length";
    case ErrorCode::DanglingEndpoint: return "dangling_endpoint";
    case ErrorCode::UnsupportedLoop: return "unsupported_loop";
    case ErrorCode::DuplicateId: return "duplicate_id";
    case ErrorCode::GraphStructure: return "graph_structure";
    case ErrorCode::NormalizationViolation: return "normalization_violation";
    case ErrorCode::DirichletExcluded: return "dirichlet_excluded";
    case ErrorCode::NegativeCoefficient: return "negative_coefficient";
    case ErrorCode::KeyMismatch: return "key_mismatch";
    case ErrorCode::FunctionInvalid: return "function_invalid";
    case ErrorCode::SingularSecularMatrix: return "singular_secular_matrix";
    case ErrorCode::ResidualTooLarge: return "residual_too_large";
    case ErrorCode::SeriesNotConverged: return "series_not_converged";
    case ErrorCode::ScanInconclusive: return "scan_inconclusive";
    case ErrorCode::ShellTooLarge: return "shell_too_large";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::InvalidArgument: return "invalid_argument";
  }
  return "unknown";
}

}  // namespace graphbm
