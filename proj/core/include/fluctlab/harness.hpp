// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fluctlab/ensemble.hpp"
#include "fluctlab/fluctstat.hpp"

namespace fluctlab {

struct StatisticSpec {
  enum class Kind {
    y_entry,        // Y_n(z)_ij
    f_entry,        // sqrt(n)-normalized entry of f(M/sqrt n)
    s_combination,  // S_n(z) for a CombinationSpec
    trace_kernel,   // (1/n) tr(R(z) R(w)^T)
    norm,           // spectral norm of M/sqrt(n)
    qf_diagnostic,  // E|x^T x / n - 1|^4 table
  };
  Kind kind = Kind::trace_kernel;
  Complex z{3.0, 0.0};
  Complex w{3.0, 0.0};
  int i = 0;  // 0-based tracked indices
  int j = 0;
  std::string function;  // f_entry: name accepted by parse_function()
  CombinationSpec combination;

  std::string id() const;
};

struct ExperimentConfig {
  EnsembleSpec ensemble;  // template; n is taken from n_grid
  std::vector<int> n_grid;
  long trials = 0;
  StatisticSpec statistic;
  int l = 2;
  double guard_kappa = 2.25;
  double norm_tol = 1e-6;
  int workers = 1;
};

// Aggregates for one (n, statistic) cell.  `theory` is the limiting target:
// the limiting variance for CLT statistics, the limiting mean for
// trace-kernel and norm statistics.
struct RowReport {
  int n = 0;
  long trials = 0;
  long guard_rejects = 0;
  long accepted = 0;
  Complex mean{0.0};
  double mean_stderr = 0.0;
  double variance = 0.0;        // (1/(T-1)) sum |x - mean|^2 over accepted
  double variance_stderr = 0.0;
  Complex theory{0.0};
  double abs_dev = 0.0;
  double rel_dev = 0.0;
  double ks_distance = 0.0;  // NaN when not applicable
  double p_value = 0.0;      // NaN when not applicable
};

struct Report {
  ExperimentConfig config;
  std::vector<RowReport> rows;
  double wall_seconds = 0.0;
  std::string version;
};

// Runs trials for every n in the grid and aggregates.  Trials are
// substream-keyed by trial index, so reports are identical for any worker
// count (wall_seconds aside).
Report run_experiment(const ExperimentConfig& config);

// Kolmogorov-Smirnov distance against the mean-zero normal with the given
// theory variance, with the asymptotic p-value.
struct NormalityResult {
  double distance = 0.0;
  double p_value = 0.0;
};
NormalityResult normality_test(const std::vector<double>& samples,
                               double target_variance);

// Survival function of the Kolmogorov distribution at lambda.
double kolmogorov_survival(double lambda);

// (1/T) sum a_t conj(b_t) - mean(a) conj(mean(b)), with a jackknife
// standard error on the modulus.
struct CovarianceEstimate {
  Complex value{0.0};
  double stderr = 0.0;
};
CovarianceEstimate empirical_covariance(
    const std::vector<std::pair<Complex, Complex>>& pairs);

struct QfDiagnosticRow {
  int n = 0;
  double value = 0.0;
  bool exact = false;  // true when obtained by support enumeration
};
std::vector<QfDiagnosticRow> qf_diagnostic(const std::vector<int>& n_grid,
                                           Distribution distribution,
                                           long trials, std::uint64_t seed);

std::string_view statistic_kind_name(StatisticSpec::Kind kind);
StatisticSpec::Kind parse_statistic_kind(std::string_view name);

}  // namespace fluctlab
