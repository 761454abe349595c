// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "fluctlab/harness.hpp"

namespace fluctlab {

// Full report, including the resolved config, the code version, and wall
// time.  Keys are sorted, so parse -> serialize round-trips bit-identically.
nlohmann::json report_to_json(const Report& report);

// One row per (n, statistic), fields in the documented fixed order:
// n,statistic,mean,variance,stderr,theory,abs_dev,rel_dev,p_value,
// guard_rejects,trials.  "." decimal separator, locale-independent, no
// timing metadata.
std::string summary_csv(const Report& report);

}  // namespace fluctlab
