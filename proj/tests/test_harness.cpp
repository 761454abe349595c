// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "fluctlab/errors.hpp"
#include "fluctlab/harness.hpp"
#include "fluctlab/report.hpp"

using namespace fluctlab;

TEST_CASE("kolmogorov survival function") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(-1.0) == 1.0);
  double prev = 1.0;
  for (double lam : {0.3, 0.6, 1.0, 1.5, 2.0}) {
    const double q = kolmogorov_survival(lam);
    CHECK(q < prev);
    prev = q;
  }
  // Tabulated: Q(1.36) ~ 0.049.
  CHECK(std::abs(kolmogorov_survival(1.36) - 0.049) <= 0.002);
}

TEST_CASE("normality_test") {
  SUBCASE("guards") {
    CHECK_THROWS_AS(normality_test(std::vector<double>(50, 0.1), 1.0),
                    InsufficientDataError);
    CHECK_THROWS_AS(normality_test(std::vector<double>(200, 0.0), 1.0),
                    DegenerateSampleError);
  }

  SUBCASE("self-test calibration") {
    // Repeated self-tests with true-normal draws: p > 0.001 in >= 99%.
    int failures = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
      SubstreamRng rng(500 + rep, 0);
      std::vector<double> xs(10000);
      for (double& x : xs) x = 2.0 * rng.gaussian();
      if (normality_test(xs, 4.0).p_value <= 0.001) ++failures;
    }
    CHECK(failures <= 1);
  }

  SUBCASE("power against the wrong variance") {
    SubstreamRng rng(7, 0);
    std::vector<double> xs(10000);
    for (double& x : xs) x = 2.0 * rng.gaussian();  // variance 4
    CHECK(normality_test(xs, 1.0).p_value < 1e-6);
  }
}

TEST_CASE("empirical_covariance") {
  SUBCASE("constant pairs give zero") {
    std::vector<std::pair<Complex, Complex>> pairs(
        50, {Complex{2.0, 1.0}, Complex{-1.0, 3.0}});
    const CovarianceEstimate e = empirical_covariance(pairs);
    CHECK(std::abs(e.value) <= 1e-14);
  }

  SUBCASE("needs at least two pairs") {
    CHECK_THROWS_AS(
        empirical_covariance({{Complex{1.0}, Complex{1.0}}}),
        InsufficientDataError);
  }

  SUBCASE("(x, x) pairs estimate variance 1") {
    SubstreamRng rng(12, 0);
    std::vector<std::pair<Complex, Complex>> pairs;
    for (int t = 0; t < 10000; ++t) {
      const Complex x{rng.gaussian(), 0.0};
      pairs.push_back({x, x});
    }
    const CovarianceEstimate e = empirical_covariance(pairs);
    CHECK(std::abs(e.value - Complex{1.0}) <= 4.0 * e.stderr);
  }

  SUBCASE("independent pairs estimate zero") {
    SubstreamRng rng(13, 0);
    std::vector<std::pair<Complex, Complex>> pairs;
    for (int t = 0; t < 10000; ++t) {
      pairs.push_back({Complex{rng.gaussian(), 0.0},
                       Complex{rng.gaussian(), 0.0}});
    }
    const CovarianceEstimate e = empirical_covariance(pairs);
    CHECK(std::abs(e.value) <= 4.0 * e.stderr);
  }
}

TEST_CASE("qf_diagnostic") {
  SUBCASE("three-point exact values (3n-2)/n^3") {
    const auto rows = qf_diagnostic({2, 4, 8}, Distribution::three_point, 0, 0);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].exact);
    CHECK(rows[0].value == 0.5);
    CHECK(rows[1].value == 0.15625);
    CHECK(rows[2].value == 0.04296875);
  }

  SUBCASE("rademacher is the degenerate case") {
    CHECK_THROWS_AS(qf_diagnostic({4}, Distribution::rademacher, 100, 1),
                    DegenerateDiagnosticError);
  }

  SUBCASE("nonincreasing along the grid, including the Monte Carlo tail") {
    const auto rows =
        qf_diagnostic({2, 4, 8, 16, 32}, Distribution::three_point, 20000, 9);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      CHECK(rows[k].value <= rows[k - 1].value);
    }
    CHECK_FALSE(rows.back().exact);
    CHECK(rows.back().value > 0.0);
  }
}

namespace {

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.ensemble = {Distribution::gaussian, 0, 2026, 0};
  c.n_grid = {32};
  c.trials = 50;
  c.l = 2;
  return c;
}

}  // namespace

TEST_CASE("run_experiment validation") {
  ExperimentConfig c = base_config();
  c.trials = 1;
  CHECK_THROWS_AS(run_experiment(c), Error);

  c = base_config();
  c.n_grid = {};
  CHECK_THROWS_AS(run_experiment(c), Error);

  c = base_config();
  c.statistic.kind = StatisticSpec::Kind::y_entry;
  c.statistic.i = 3;  // outside l = 2
  CHECK_THROWS_AS(run_experiment(c), Error);
}

TEST_CASE("run_experiment: linear f-entry is exactly degenerate") {
  ExperimentConfig c = base_config();
  c.statistic.kind = StatisticSpec::Kind::f_entry;
  c.statistic.function = "poly:0,1";
  c.statistic.i = 0;
  c.statistic.j = 1;
  const Report r = run_experiment(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].mean == Complex{0.0});
  CHECK(r.rows[0].variance == 0.0);
  CHECK(r.rows[0].theory == Complex{0.0});
  CHECK(r.rows[0].guard_rejects + r.rows[0].accepted == r.rows[0].trials);
}

TEST_CASE("run_experiment: trace kernel heads toward 1/(zw-1)") {
  ExperimentConfig c = base_config();
  c.statistic.kind = StatisticSpec::Kind::trace_kernel;
  c.statistic.z = c.statistic.w = Complex{3.0, 0.0};
  c.n_grid = {256};
  c.trials = 50;
  const Report r = run_experiment(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].theory == Complex{0.125});
  // Loose desk-scale band; the tight n = 1024 version runs in acceptance.
  CHECK(std::abs(r.rows[0].mean - Complex{0.125}) <= 0.02);
}

TEST_CASE("run_experiment: deterministic replay across worker counts") {
  ExperimentConfig c = base_config();
  c.statistic.kind = StatisticSpec::Kind::y_entry;
  c.statistic.z = Complex{3.0, 0.0};
  c.statistic.i = 0;
  c.statistic.j = 1;
  c.n_grid = {24, 32};
  c.trials = 60;

  c.workers = 1;
  const Report a = run_experiment(c);
  c.workers = 4;
  const Report b = run_experiment(c);
  CHECK(summary_csv(a) == summary_csv(b));
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].mean == b.rows[k].mean);
    CHECK(a.rows[k].variance == b.rows[k].variance);
    CHECK(a.rows[k].guard_rejects == b.rows[k].guard_rejects);
  }
}

TEST_CASE("run_experiment: qf-diagnostic rows") {
  ExperimentConfig c = base_config();
  c.ensemble.distribution = Distribution::three_point;
  c.statistic.kind = StatisticSpec::Kind::qf_diagnostic;
  c.n_grid = {2, 4};
  c.trials = 10;
  const Report r = run_experiment(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].mean == Complex{0.5});
  CHECK(r.rows[1].mean == Complex{0.15625});
}

TEST_CASE("statistic kind names round-trip") {
  using K = StatisticSpec::Kind;
  for (K k : {K::y_entry, K::f_entry, K::s_combination, K::trace_kernel,
              K::norm, K::qf_diagnostic}) {
    CHECK(parse_statistic_kind(statistic_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_statistic_kind("entropy"), Error);
}
