// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#include "fluctlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "fluctlab/errors.hpp"
#include "fluctlab/theory.hpp"

#ifndef FLUCTLAB_VERSION
#define FLUCTLAB_VERSION "0.0.0+unknown"
#endif

namespace fluctlab {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_complex(Complex c) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << c.real();
  if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
  return os.str();
}

bool is_clt_kind(StatisticSpec::Kind k) {
  return k == StatisticSpec::Kind::y_entry ||
         k == StatisticSpec::Kind::f_entry ||
         k == StatisticSpec::Kind::s_combination;
}

struct TrialValue {
  Complex value{kNan, kNan};
  bool guard_ok = false;
};

double normal_cdf(double x, double sigma) {
  return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2));
}

// Squared-support of the discrete laws, exact values.
struct SquaredSupport {
  std::vector<double> values;
  std::vector<double> probabilities;
};
SquaredSupport squared_support(Distribution d) {
  switch (d) {
    case Distribution::rademacher: return {{1.0}, {1.0}};
    case Distribution::three_point: return {{0.0, 2.0}, {0.5, 0.5}};
    default: return {};
  }
}

double qf_diagnostic_exact(int n, Distribution d) {
  const SquaredSupport s = squared_support(d);
  // Distribution of sum_i (x_i^2 - 1) by repeated convolution.
  std::map<double, double> dist{{0.0, 1.0}};
  for (int step = 0; step < n; ++step) {
    std::map<double, double> next;
    for (const auto& [sum, p] : dist) {
      for (std::size_t k = 0; k < s.values.size(); ++k) {
        next[sum + (s.values[k] - 1.0)] += p * s.probabilities[k];
      }
    }
    dist = std::move(next);
  }
  double expectation = 0.0;
  for (const auto& [sum, p] : dist) {
    const double t = sum / n;
    expectation += p * t * t * t * t;
  }
  return expectation;
}

double qf_diagnostic_monte_carlo(int n, Distribution d, long trials,
                                 std::uint64_t seed) {
  double total = 0.0;
  for (long t = 0; t < trials; ++t) {
    SubstreamRng rng(seed, static_cast<std::uint64_t>(t),
                     0x7164696167ULL + static_cast<std::uint64_t>(n));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = draw(d, rng);
      sum += x * x - 1.0;
    }
    const double v = sum / n;
    total += v * v * v * v;
  }
  return total / trials;
}

}  // namespace

std::string_view statistic_kind_name(StatisticSpec::Kind kind) {
  switch (kind) {
    case StatisticSpec::Kind::y_entry: return "Y-entry";
    case StatisticSpec::Kind::f_entry: return "f-entry";
    case StatisticSpec::Kind::s_combination: return "S-combination";
    case StatisticSpec::Kind::trace_kernel: return "trace-kernel";
    case StatisticSpec::Kind::norm: return "norm";
    case StatisticSpec::Kind::qf_diagnostic: return "qf-diagnostic";
  }
  return "?";
}

StatisticSpec::Kind parse_statistic_kind(std::string_view name) {
  if (name == "Y-entry") return StatisticSpec::Kind::y_entry;
  if (name == "f-entry") return StatisticSpec::Kind::f_entry;
  if (name == "S-combination") return StatisticSpec::Kind::s_combination;
  if (name == "trace-kernel") return StatisticSpec::Kind::trace_kernel;
  if (name == "norm") return StatisticSpec::Kind::norm;
  if (name == "qf-diagnostic") return StatisticSpec::Kind::qf_diagnostic;
  throw Error("unknown statistic kind: " + std::string(name));
}

std::string StatisticSpec::id() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << statistic_kind_name(kind);
  // Indices are stored 0-based but echoed 1-based, matching config files.
  switch (kind) {
    case Kind::y_entry:
      os << "[z=" << format_complex(z) << ";i=" << i + 1 << ";j=" << j + 1
         << "]";
      break;
    case Kind::f_entry:
      os << "[f=" << function << ";i=" << i + 1 << ";j=" << j + 1 << "]";
      break;
    case Kind::s_combination:
      os << "[z=" << format_complex(z) << "]";
      break;
    case Kind::trace_kernel:
      os << "[z=" << format_complex(z) << ";w=" << format_complex(w) << "]";
      break;
    default:
      break;
  }
  return os.str();
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double q = 0.0;
  for (int k = 1; k <= 101; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

NormalityResult normality_test(const std::vector<double>& samples,
                               double target_variance) {
  const std::size_t T = samples.size();
  if (T < 100) {
    throw InsufficientDataError("normality_test: need >= 100 samples");
  }
  if (!(target_variance > 0.0)) {
    throw Error("normality_test: target variance must be positive");
  }
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) {
    throw DegenerateSampleError("normality_test: all samples equal");
  }
  const double sigma = std::sqrt(target_variance);
  const double n = static_cast<double>(T);
  double d = 0.0;
  for (std::size_t k = 0; k < T; ++k) {
    const double cdf = normal_cdf(sorted[k], sigma);
    d = std::max(d, std::max(cdf - static_cast<double>(k) / n,
                             static_cast<double>(k + 1) / n - cdf));
  }
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  return {d, kolmogorov_survival(lambda)};
}

CovarianceEstimate empirical_covariance(
    const std::vector<std::pair<Complex, Complex>>& pairs) {
  const std::size_t T = pairs.size();
  if (T < 2) throw InsufficientDataError("empirical_covariance: need >= 2");
  Complex sum_ab = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [a, b] : pairs) {
    sum_ab += a * std::conj(b);
    sum_a += a;
    sum_b += b;
  }
  const double n = static_cast<double>(T);
  const Complex theta = sum_ab / n - (sum_a / n) * std::conj(sum_b / n);

  // Jackknife over leave-one-out estimates.
  std::vector<Complex> loo(T);
  Complex loo_mean = 0.0;
  const double m = n - 1.0;
  for (std::size_t t = 0; t < T; ++t) {
    const auto& [a, b] = pairs[t];
    const Complex ab = sum_ab - a * std::conj(b);
    const Complex sa = sum_a - a;
    const Complex sb = sum_b - b;
    loo[t] = ab / m - (sa / m) * std::conj(sb / m);
    loo_mean += loo[t];
  }
  loo_mean /= n;
  double ss = 0.0;
  for (const Complex& th : loo) ss += std::norm(th - loo_mean);
  return {theta, std::sqrt(m / n * ss)};
}

std::vector<QfDiagnosticRow> qf_diagnostic(const std::vector<int>& n_grid,
                                           Distribution distribution,
                                           long trials, std::uint64_t seed) {
  if (distribution == Distribution::rademacher) {
    throw DegenerateDiagnosticError(
        "qf_diagnostic: x^T x = n identically for rademacher; statistic is 0");
  }
  std::vector<QfDiagnosticRow> rows;
  for (int n : n_grid) {
    QfDiagnosticRow row;
    row.n = n;
    if (is_discrete(distribution) && n <= 8) {
      row.value = qf_diagnostic_exact(n, distribution);
      row.exact = true;
    } else {
      row.value = qf_diagnostic_monte_carlo(n, distribution, trials, seed);
      row.exact = false;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

Complex theory_target(const ExperimentConfig& config) {
  const StatisticSpec& s = config.statistic;
  switch (s.kind) {
    case StatisticSpec::Kind::y_entry:
      return kernel_Y(s.z, s.z);
    case StatisticSpec::Kind::f_entry:
      return covariance_Z(parse_function(s.function),
                          parse_function(s.function))
          .value;
    case StatisticSpec::Kind::s_combination:
      return combination_variance(s.combination.alphas, s.combination.betas,
                                  s.z);
    case StatisticSpec::Kind::trace_kernel:
      return 1.0 / (s.z * s.w - 1.0);
    case StatisticSpec::Kind::norm:
      return 2.0;
    case StatisticSpec::Kind::qf_diagnostic:
      return 0.0;
  }
  return 0.0;
}

TrialValue compute_trial(const ExperimentConfig& config, int n, long trial) {
  EnsembleSpec spec = config.ensemble;
  spec.n = n;
  spec.stream_id = static_cast<std::uint64_t>(trial);
  const Eigen::MatrixXd M = sample_matrix(spec);
  const StatisticSpec& s = config.statistic;
  TrialValue out;
  switch (s.kind) {
    case StatisticSpec::Kind::y_entry: {
      const YSample y =
          stat_Y(M, s.z, config.l, config.guard_kappa, config.norm_tol);
      out.value = y.value(s.i, s.j);
      out.guard_ok = y.guard_ok;
      break;
    }
    case StatisticSpec::Kind::f_entry: {
      const FluctuationSample fs =
          stat_f(M, parse_function(s.function), s.i, s.j, config.guard_kappa,
                 config.norm_tol);
      out.value = fs.value;
      out.guard_ok = fs.guard_ok;
      break;
    }
    case StatisticSpec::Kind::s_combination: {
      const YSample y =
          stat_Y(M, s.z, config.l, config.guard_kappa, config.norm_tol);
      out.value = y.guard_ok ? stat_S(y.value, s.combination) : Complex{kNan};
      out.guard_ok = y.guard_ok;
      break;
    }
    case StatisticSpec::Kind::trace_kernel: {
      const TraceKernelSample ts =
          stat_trace_kernel(M, s.z, s.w, config.guard_kappa, config.norm_tol);
      out.value = ts.value;
      out.guard_ok = ts.guard_ok;
      break;
    }
    case StatisticSpec::Kind::norm: {
      const double est = spectral_norm(
          Eigen::MatrixXd(M / std::sqrt(static_cast<double>(n))),
          config.norm_tol);
      out.value = est;
      out.guard_ok = est <= config.guard_kappa;
      break;
    }
    case StatisticSpec::Kind::qf_diagnostic:
      break;  // handled separately
  }
  return out;
}

void validate_config(const ExperimentConfig& config) {
  if (config.trials < 2) throw Error("run_experiment: trials must be >= 2");
  if (config.n_grid.empty()) throw Error("run_experiment: empty n-grid");
  const int min_n = *std::min_element(config.n_grid.begin(),
                                      config.n_grid.end());
  if (config.l < 1 || config.l > min_n) {
    throw Error("run_experiment: need 1 <= l <= min(n-grid)");
  }
  const StatisticSpec& s = config.statistic;
  if (is_clt_kind(s.kind) &&
      (s.i < 0 || s.j < 0 || s.i >= config.l || s.j >= config.l)) {
    throw Error("run_experiment: tracked entry (i, j) must lie within l");
  }
  if (s.kind == StatisticSpec::Kind::f_entry) {
    parse_function(s.function);  // throws on malformed names
  }
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const auto t0 = std::chrono::steady_clock::now();
  Report report;
  report.config = config;
  report.version = FLUCTLAB_VERSION;

  if (config.statistic.kind == StatisticSpec::Kind::qf_diagnostic) {
    const auto rows =
        qf_diagnostic(config.n_grid, config.ensemble.distribution,
                      config.trials, config.ensemble.seed);
    for (const QfDiagnosticRow& qr : rows) {
      RowReport row;
      row.n = qr.n;
      row.trials = qr.exact ? 0 : config.trials;
      row.accepted = row.trials;
      row.mean = qr.value;
      row.theory = 0.0;
      row.abs_dev = qr.value;
      row.rel_dev = kNan;
      row.ks_distance = kNan;
      row.p_value = kNan;
      report.rows.push_back(row);
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return report;
  }

  const Complex theory = theory_target(config);
  for (int n : config.n_grid) {
    std::vector<TrialValue> values(static_cast<std::size_t>(config.trials));
    const int workers = std::max(1, config.workers);
    std::atomic<long> next{0};
    auto work = [&] {
      for (;;) {
        const long t = next.fetch_add(1);
        if (t >= config.trials) return;
        values[static_cast<std::size_t>(t)] = compute_trial(config, n, t);
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int wk = 0; wk < workers; ++wk) pool.emplace_back(work);
      for (std::thread& th : pool) th.join();
    }

    // Aggregate accepted samples in trial order.
    RowReport row;
    row.n = n;
    row.trials = config.trials;
    std::vector<double> real_parts;
    Complex sum = 0.0;
    for (const TrialValue& tv : values) {
      if (!tv.guard_ok) {
        ++row.guard_rejects;
        continue;
      }
      ++row.accepted;
      sum += tv.value;
      real_parts.push_back(tv.value.real());
    }
    if (row.accepted == 0) {
      throw EmptyAggregateError("run_experiment: all trials guard-rejected at n=" +
                                std::to_string(n));
    }
    row.mean = sum / static_cast<double>(row.accepted);
    double ss = 0.0, s4 = 0.0;
    for (const TrialValue& tv : values) {
      if (!tv.guard_ok) continue;
      const double d2 = std::norm(tv.value - row.mean);
      ss += d2;
      s4 += d2 * d2;
    }
    const double acc = static_cast<double>(row.accepted);
    row.variance = row.accepted > 1 ? ss / (acc - 1.0) : 0.0;
    const double m4 = s4 / acc;
    row.variance_stderr =
        std::sqrt(std::max(0.0, m4 - row.variance * row.variance) / acc);
    row.mean_stderr = std::sqrt(row.variance / acc);
    row.theory = theory;

    const StatisticSpec::Kind kind = config.statistic.kind;
    const double target = theory.real();
    const double empirical =
        is_clt_kind(kind) ? row.variance : row.mean.real();
    row.abs_dev = std::abs(empirical - target);
    row.rel_dev = target != 0.0 ? row.abs_dev / std::abs(target) : kNan;

    row.ks_distance = kNan;
    row.p_value = kNan;
    if (is_clt_kind(kind) && target > 1e-14 && row.accepted >= 100) {
      const NormalityResult nr = normality_test(real_parts, target);
      row.ks_distance = nr.distance;
      row.p_value = nr.p_value;
    }
    report.rows.push_back(row);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace fluctlab
