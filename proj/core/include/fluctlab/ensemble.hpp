// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fluctlab/rng.hpp"

namespace fluctlab {

// Built-in entry laws.  All have mean 0, variance 1, finite fourth moment.
enum class Distribution {
  gaussian,    // standard normal
  rademacher,  // +-1 with probability 1/2 each
  three_point, // +-sqrt(2) w.p. 1/4 each, 0 w.p. 1/2
  uniform,     // uniform on [-sqrt(3), sqrt(3)]
};

Distribution parse_distribution(std::string_view name);
std::string_view distribution_name(Distribution d);

// Exact moments of the untruncated law.
double distribution_fourth_moment(Distribution d);

// Support of a discrete law with probabilities; empty for continuous laws.
struct DiscreteSupport {
  std::vector<double> points;
  std::vector<double> probabilities;
};
bool is_discrete(Distribution d);
DiscreteSupport discrete_support(Distribution d);

double draw(Distribution d, SubstreamRng& rng);

struct EnsembleSpec {
  Distribution distribution = Distribution::gaussian;
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Thresholds: eps_n * sqrt(n) off the tracked band, eps_n * n^{1/4} inside
// the first l rows and columns.  eps_n = 0 selects the default n^{-1/8} rule.
struct TruncationPolicy {
  int l = 2;
  double eps_n = 0.0;
  bool restandardize = true;

  double eps(int n) const;
  double bulk_threshold(int n) const;
  double band_threshold(int n) const;
};

struct BlockDecomposition {
  Eigen::MatrixXd X;        // l x l
  Eigen::MatrixXd psi;      // l x (n-l)
  Eigen::MatrixXd phi;      // (n-l) x l
  Eigen::MatrixXd M_lower;  // (n-l) x (n-l)
};

// Moments of the law conditioned on |x| <= threshold.
struct ClippedMoments {
  double mass;      // probability of the event |x| <= threshold
  double mean;
  double variance;  // about the conditional mean
};
ClippedMoments clipped_moments(Distribution d, double threshold);

Eigen::MatrixXd sample_matrix(const EnsembleSpec& spec);

Eigen::MatrixXd truncate(const Eigen::MatrixXd& M, const EnsembleSpec& spec,
                         const TruncationPolicy& policy);

BlockDecomposition block_decompose(const Eigen::MatrixXd& M, int l);

}  // namespace fluctlab
