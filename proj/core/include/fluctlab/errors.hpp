// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fluctlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDimensionError : Error {
  using Error::Error;
};

struct DegenerateTruncationError : Error {
  using Error::Error;
};

struct GuardViolationError : Error {
  using Error::Error;
};

struct SingularResolventError : Error {
  using Error::Error;
};

// Carries the last power-iteration estimate so callers can inspect it.
struct ConvergenceFailureError : Error {
  ConvergenceFailureError(const std::string& what, double last)
      : Error(what), last_iterate(last) {}
  double last_iterate;
};

struct InsufficientDataError : Error {
  using Error::Error;
};

struct DegenerateSampleError : Error {
  using Error::Error;
};

struct EnumerationTooLargeError : Error {
  using Error::Error;
};

struct EmptyAggregateError : Error {
  using Error::Error;
};

struct DegenerateDiagnosticError : Error {
  using Error::Error;
};

struct SpecViolationError : Error {
  using Error::Error;
};

// Malformed run configuration; names the offending field.
struct ConfigError : Error {
  ConfigError(const std::string& field, const std::string& what)
      : Error(what), field(field) {}
  std::string field;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace fluctlab
