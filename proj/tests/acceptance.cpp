// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: ten numbered criteria, one pass/fail line each.  Exits
// nonzero when any criterion fails.  The Monte Carlo sweeps (criteria 3, 4,
// 5, 7) take several minutes on one core; criteria 3, 4 and 7 share a single
// n = 1024 sweep so the matrices are sampled and factored once.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fluctlab/ensemble.hpp"
#include "fluctlab/fluctstat.hpp"
#include "fluctlab/harness.hpp"
#include "fluctlab/oracles.hpp"
#include "fluctlab/theory.hpp"

namespace fs = std::filesystem;
using namespace fluctlab;

namespace {

constexpr double kKappa = 2.25;

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL")
            << " - " << what << std::endl;
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Eigen::MatrixXd random_with_norm(int n, double target, std::uint64_t seed,
                                 std::uint64_t stream) {
  const Eigen::MatrixXd m =
      sample_matrix({Distribution::uniform, n, seed, stream});
  return m * (target / spectral_norm(m, 1e-12));
}

// --- criterion 1: series vs contour route equivalence -----------------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const ContourSpec contour;
  double worst = 0.0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd A = random_with_norm(6, 2.0, 101, rep);
    for (int t = 0; t <= 10; ++t) {
      const AnalyticFunction f = AnalyticFunction::monomial(t);
      const Eigen::MatrixXcd s = eval_series(f, A, kKappa).value;
      const Eigen::MatrixXcd c = eval_contour(f, A, contour);
      worst = std::max(worst, (s - c).cwiseAbs().maxCoeff());
    }
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "route equivalence, 20 matrices x degrees 0..10, max deviation "
     << worst << " (limit 1e-10), " << elapsed << " s";
  report(1, worst <= 1e-10 && elapsed < 5.0, os.str());
}

// --- criterion 2: covariance series vs double contour -----------------------

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const ContourSpec contour;
  const AnalyticFunction z2 = AnalyticFunction::monomial(2);
  const AnalyticFunction z3 = AnalyticFunction::monomial(3);
  const AnalyticFunction ex = AnalyticFunction::exponential();
  double worst = 0.0;
  for (const auto& [f, g] : {std::pair{z2, z2}, {z2, z3}, {ex, ex}}) {
    worst = std::max(worst, std::abs(covariance_Z(f, g).value -
                                     covariance_Z_contour(f, g, contour)));
  }
  // Partial sums of sum_{r>=2} 1/(r!)^2, accumulated independently here.
  double oracle = 0.0, rfact = 1.0;
  for (int r = 1; r <= 40; ++r) {
    rfact *= r;
    if (r >= 2) oracle += 1.0 / (rfact * rfact);
  }
  const double exp_dev = std::abs(covariance_Z(ex, ex).value - oracle);
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "covariance identity, max series/contour deviation " << worst
     << " (limit 1e-8), exp vs partial-sum oracle " << exp_dev << ", "
     << elapsed << " s";
  report(2, worst <= 1e-8 && exp_dev <= 1e-8 && elapsed < 5.0, os.str());
}

// --- criteria 3, 4, 7: shared n = 1024 Gaussian sweep ------------------------

void criteria_3_4_7() {
  const int n = 1024;
  const long target_accepted = 4000;
  const long max_trials = 4400;
  const double norm_tol = 1e-3;
  const Complex z{3.0, 0.0};
  const AnalyticFunction f2 = AnalyticFunction::monomial(2);
  const AnalyticFunction f3 = AnalyticFunction::monomial(3);

  std::vector<Complex> y12, y21, s2, s3;
  y12.reserve(target_accepted);
  long rejects = 0;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  for (long t = 0; t < max_trials &&
                   static_cast<long>(y12.size()) < target_accepted;
       ++t) {
    const Eigen::MatrixXd M = sample_matrix(
        {Distribution::gaussian, n, 20260825, static_cast<std::uint64_t>(t)});
    const double est =
        spectral_norm(Eigen::MatrixXd(M / sqrt_n), norm_tol);
    if (est > kKappa) {
      ++rejects;
      continue;
    }
    const YSample y = stat_Y(M, z, 2, kKappa, norm_tol, est);
    const FluctuationSample a = stat_f(M, f2, 0, 1, kKappa, norm_tol, est);
    const FluctuationSample b = stat_f(M, f3, 0, 1, kKappa, norm_tol, est);
    y12.push_back(y.value(0, 1));
    y21.push_back(y.value(1, 0));
    s2.push_back(a.value);
    s3.push_back(b.value);
  }
  const double T = static_cast<double>(y12.size());

  // Criterion 3: f = z^2 entry (1,2) is asymptotically standard normal.
  {
    double mean = 0.0;
    for (const Complex& v : s2) mean += v.real();
    mean /= T;
    double var = 0.0;
    std::vector<double> reals;
    reals.reserve(s2.size());
    for (const Complex& v : s2) {
      var += (v.real() - mean) * (v.real() - mean);
      reals.push_back(v.real());
    }
    var /= (T - 1.0);
    const double se = std::sqrt(var / T);
    const double p = normality_test(reals, 1.0).p_value;
    std::ostringstream os;
    os << "monomial CLT f = z^2, " << static_cast<long>(T)
       << " guarded trials: variance " << var << " (band 0.90..1.10), mean "
       << mean << " (4 SE = " << 4.0 * se << "), normality p = " << p;
    report(3, std::abs(var - 1.0) <= 0.10 && std::abs(mean) <= 4.0 * se &&
                  p >= 0.001 && T >= target_accepted,
           os.str());
  }

  // Criterion 4: resolvent kernel at z = 3, entry (1,2).
  {
    double second_moment = 0.0, im_mean = 0.0;
    for (const Complex& v : y12) {
      second_moment += std::norm(v);
      im_mean += v.imag();
    }
    second_moment /= T;
    im_mean /= T;
    double im_var = 0.0;
    for (const Complex& v : y12) {
      im_var += (v.imag() - im_mean) * (v.imag() - im_mean);
    }
    im_var /= (T - 1.0);
    const double theory = 1.0 / 648.0;
    const double rel = std::abs(second_moment - theory) / theory;
    std::ostringstream os;
    os << "resolvent kernel z = 3: E|Y|^2 = " << second_moment
       << " vs 1/648, relative deviation " << rel
       << " (limit 0.15), Im-part variance " << im_var << " (limit 1e-20)";
    report(4, rel <= 0.15 && im_var <= 1e-20, os.str());
  }

  // Criterion 7: cross-entry and cross-function independence.
  {
    std::vector<std::pair<Complex, Complex>> ypairs, fpairs;
    for (std::size_t k = 0; k < y12.size(); ++k) {
      ypairs.push_back({y12[k], y21[k]});
      fpairs.push_back({s2[k], s3[k]});
    }
    const CovarianceEstimate ye = empirical_covariance(ypairs);
    const CovarianceEstimate fe = empirical_covariance(fpairs);
    std::ostringstream os;
    os << "independence: |cov(Y_12, Y_21)| = " << std::abs(ye.value)
       << " vs 4 SE = " << 4.0 * ye.stderr << "; |cov(Z(z^2), Z(z^3))| = "
       << std::abs(fe.value) << " vs 4 SE = " << 4.0 * fe.stderr;
    report(7, std::abs(ye.value) <= 4.0 * ye.stderr &&
                  std::abs(fe.value) <= 4.0 * fe.stderr,
           os.str());
  }
}

// --- criterion 5: trace kernel ----------------------------------------------

void criterion_5() {
  ExperimentConfig c;
  c.ensemble = {Distribution::gaussian, 0, 31415, 0};
  c.n_grid = {1024};
  c.trials = 200;
  c.norm_tol = 1e-3;
  c.statistic.kind = StatisticSpec::Kind::trace_kernel;
  c.statistic.z = c.statistic.w = Complex{3.0, 0.0};
  const Report r = run_experiment(c);
  const RowReport& row = r.rows.at(0);
  const double sd = std::sqrt(row.variance);
  std::ostringstream os;
  os << "trace kernel z = w = 3, n = 1024, 200 trials: mean "
     << row.mean.real() << " (target 0.125 +- 0.01), sd " << sd
     << " (limit 0.02)";
  report(5, std::abs(row.mean.real() - 0.125) <= 0.01 && sd <= 0.02, os.str());
}

// --- criterion 6: spectral norm and guard rate ------------------------------

void criterion_6() {
  const std::vector<int> grid{256, 512, 1024};
  std::vector<double> reject_rate;
  double min_norm_1024 = 1e9, max_norm_1024 = -1e9;
  for (int n : grid) {
    long rejects = 0;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (long t = 0; t < 100; ++t) {
      const Eigen::MatrixXd M = sample_matrix(
          {Distribution::gaussian, n, 2718, static_cast<std::uint64_t>(t)});
      const double est = spectral_norm(Eigen::MatrixXd(M / sqrt_n), 1e-4);
      if (est > kKappa) ++rejects;
      if (n == 1024) {
        min_norm_1024 = std::min(min_norm_1024, est);
        max_norm_1024 = std::max(max_norm_1024, est);
      }
    }
    reject_rate.push_back(rejects / 100.0);
  }
  const bool in_band = min_norm_1024 >= 1.85 && max_norm_1024 <= 2.20;
  const bool nonincreasing = reject_rate[1] <= reject_rate[0] &&
                             reject_rate[2] <= reject_rate[1];
  std::ostringstream os;
  os << "spectral norm n = 1024: estimates in [" << min_norm_1024 << ", "
     << max_norm_1024 << "] (band 1.85..2.20); reject rates "
     << reject_rate[0] << "/" << reject_rate[1] << "/" << reject_rate[2]
     << " over n = 256/512/1024 (limit 0.05, nonincreasing)";
  report(6, in_band && reject_rate[2] < 0.05 && nonincreasing, os.str());
}

// --- criterion 8: exact cancellations ----------------------------------------

void criterion_8() {
  const AnalyticFunction affine =
      AnalyticFunction::polynomial({1.5, -0.5}, "affine");
  bool affine_zero = true;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const Eigen::MatrixXd M =
        sample_matrix({Distribution::gaussian, 16, 555, t});
    const FluctuationSample s = stat_f(M, affine, 0, 1, kKappa);
    affine_zero = affine_zero && s.value == Complex{0.0};
  }

  const YSample zero = stat_Y(Eigen::MatrixXd::Zero(8, 8), Complex{3.0}, 2,
                              kKappa);
  const bool zero_matrix = zero.value.cwiseAbs().maxCoeff() == 0.0;

  double worst_conj = 0.0;
  const Complex zc{2.5, 1.0};
  for (std::uint64_t t = 0; t < 20; ++t) {
    const Eigen::MatrixXd M = random_with_norm(32, 2.0 * std::sqrt(32.0),
                                               777, t);
    const YSample a = stat_Y(M, zc, 2, kKappa);
    const YSample b = stat_Y(M, std::conj(zc), 2, kKappa);
    worst_conj = std::max(
        worst_conj, (b.value - a.value.conjugate()).cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << "exact cancellations: affine f identically 0 over 100 matrices ("
     << (affine_zero ? "yes" : "no") << "), Y(0) = 0 ("
     << (zero_matrix ? "yes" : "no") << "), conjugation deviation "
     << worst_conj << " (limit 1e-12)";
  report(8, affine_zero && zero_matrix && worst_conj <= 1e-12, os.str());
}

// --- criterion 9: oracles ----------------------------------------------------

void criterion_9() {
  SubstreamRng rng(4242, 0);
  double worst_trace = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rep % 3;
    Eigen::MatrixXd B(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) B(i, j) = 2.0 * rng.uniform01() - 1.0;
    }
    worst_trace =
        std::max(worst_trace, std::abs(trace_identity_enumerate(B) -
                                       (B * B.transpose()).trace() / n));
  }

  const auto rows = qf_diagnostic({2, 4, 8}, Distribution::three_point, 0, 0);
  const bool qf_exact = rows[0].value == 0.5 && rows[1].value == 0.15625 &&
                        rows[2].value == 0.04296875;

  const int n = 4096;
  QuadraticFormSpec spec;
  spec.b_list = {Eigen::MatrixXd::Identity(n, n)};
  spec.norm_bound = 1.0;
  const int draws = 10000;
  std::vector<double> zs(draws);
  double var = 0.0;
  for (int t = 0; t < draws; ++t) {
    const double v =
        qf_clt_sample(spec, 99, static_cast<std::uint64_t>(t))(0);
    zs[static_cast<std::size_t>(t)] = v;
    var += v * v;
  }
  var /= draws;
  const double p = normality_test(zs, 1.0).p_value;
  std::ostringstream os;
  os << "oracles: trace identity worst deviation " << worst_trace
     << " (limit 1e-14); qf diagnostic exact (" << (qf_exact ? "yes" : "no")
     << "); qf CLT variance " << var << " (1 +- 0.05), normality p = " << p;
  report(9, worst_trace <= 1e-14 && qf_exact && std::abs(var - 1.0) <= 0.05 &&
                p >= 0.001,
         os.str());
}

// --- criterion 10: byte-identical reports across worker counts ---------------

void criterion_10() {
  const fs::path dir = fs::temp_directory_path() / "fluctlab_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cfg.ini");
    cfg << "[ensemble]\ndistribution = gaussian\nseed = 8080\n\n"
           "[experiment]\nn-grid = 48, 64\ntrials = 120\n\n"
           "[statistic]\nkind = Y-entry\nz = 3\ni = 1\nj = 2\n";
  }
  const std::string base = std::string(FLUCTLAB_CLI_PATH) + " run --config " +
                           (dir / "cfg.ini").string();
  const std::string run1 = base + " --out " + (dir / "w1").string() +
                           " --format csv --workers 1 > /dev/null 2>&1";
  const std::string run4 = base + " --out " + (dir / "w4").string() +
                           " --format csv --workers 4 > /dev/null 2>&1";
  const int c1 = WEXITSTATUS(std::system(run1.c_str()));
  const int c4 = WEXITSTATUS(std::system(run4.c_str()));
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const std::string a = slurp(dir / "w1" / "summary.csv");
  const std::string b = slurp(dir / "w4" / "summary.csv");
  std::ostringstream os;
  os << "reproducibility: exits " << c1 << "/" << c4 << ", summary.csv "
     << (a == b && !a.empty() ? "byte-identical" : "DIFFERS") << " across 1 vs "
     << "4 workers";
  report(10, c1 == 0 && c4 == 0 && !a.empty() && a == b, os.str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criteria_3_4_7();
  criterion_5();
  criterion_6();
  criterion_8();
  criterion_9();
  criterion_10();
  std::cout << (g_failures == 0 ? "all criteria passed"
                                : std::to_string(g_failures) +
                                      " criterion(s) failed")
            << " in " << seconds_since(t0) << " s" << std::endl;
  return g_failures == 0 ? 0 : 1;
}
