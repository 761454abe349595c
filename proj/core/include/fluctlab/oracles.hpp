// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fluctlab/ensemble.hpp"

namespace fluctlab {

// Exact E| n^{-1/2} u^T B v |^2 over all 2^{2n} Rademacher sign patterns of
// independent u, v.  Must equal tr(B B^T)/n; n <= 8.
double trace_identity_enumerate(const Eigen::MatrixXd& B);

// Deterministic B matrices with a common norm bound, plus the entry law for
// the x, y vectors of the quadratic-form CLT.
struct QuadraticFormSpec {
  std::vector<Eigen::MatrixXd> b_list;
  double norm_bound = 0.0;
  Distribution distribution = Distribution::three_point;
};

// Validates the norm bound on every B in the spec.
void validate(const QuadraticFormSpec& spec);

// One draw of the r-vector ( n^{-1/2} x^(s)T B^s y^(s) )_s with fresh
// independent x, y per component.
Eigen::VectorXd qf_clt_sample(const QuadraticFormSpec& spec, std::uint64_t seed,
                              std::uint64_t stream_id);

// Per-component limiting variances a_2(s) = tr((B^s)^T B^s)/n.
std::vector<double> qf_clt_variances(const QuadraticFormSpec& spec);

// Smallest n at which the bounded built-in laws satisfy the appendix bound
// |x| <= eps_n n^{1/4} under the default eps_n rule; 0 for unbounded laws.
int qf_bound_threshold(Distribution d);

}  // namespace fluctlab
