// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "fluctlab/harness.hpp"

namespace fluctlab {

// Optional acceptance-style checks evaluated on every report row; any
// violation makes the run exit with status 2.
struct CheckSpec {
  std::optional<double> mean_tol;           // |mean - theory| tolerance
  std::optional<double> variance_rel_tol;   // |var - theory| / theory
  std::optional<double> p_min;              // minimum normality p-value
  std::optional<double> max_guard_reject_rate;
};

struct RunConfig {
  ExperimentConfig experiment;
  CheckSpec checks;
};

// Flat INI-style config: [section] headers and key = value lines, "#"/";"
// comments, n-grid as a comma list.  Tracked indices i, j are 1-based in the
// file and converted to 0-based internally.  Throws ConfigError naming the
// offending field.
RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_file(const std::string& path);

// One human-readable line per violated check; empty means all passed.
std::vector<std::string> evaluate_checks(const Report& report,
                                         const CheckSpec& checks);

}  // namespace fluctlab
