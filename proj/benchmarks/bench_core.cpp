// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Micro-benchmarks for the hot paths of a Monte Carlo trial: sampling,
// spectral-norm estimation, resolvent solves, and series/contour evaluation.

#include <benchmark/benchmark.h>

#include <cmath>

#include "fluctlab/ensemble.hpp"
#include "fluctlab/fluctstat.hpp"
#include "fluctlab/matfun.hpp"

using namespace fluctlab;

namespace {

Eigen::MatrixXd scaled_sample(int n) {
  const Eigen::MatrixXd m =
      sample_matrix({Distribution::gaussian, n, 42, 0});
  return m / std::sqrt(static_cast<double>(n));
}

void BM_SampleMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_matrix({Distribution::gaussian, n, 7, stream++}));
  }
}
BENCHMARK(BM_SampleMatrix)->Arg(256)->Arg(1024);

void BM_SpectralNorm(benchmark::State& state) {
  const Eigen::MatrixXd A = scaled_sample(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_norm(A, 1e-3));
  }
}
BENCHMARK(BM_SpectralNorm)->Arg(256)->Arg(1024);

void BM_Resolvent(benchmark::State& state) {
  const Eigen::MatrixXd A = scaled_sample(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolvent(A, Complex{3.0, 0.0}));
  }
}
BENCHMARK(BM_Resolvent)->Arg(256)->Arg(512);

void BM_StatY(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd M = sample_matrix({Distribution::gaussian, n, 9, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(stat_Y(M, Complex{3.0, 0.0}, 2, 2.25, 1e-3));
  }
}
BENCHMARK(BM_StatY)->Arg(256)->Arg(1024);

void BM_SeriesEntry(benchmark::State& state) {
  const Eigen::MatrixXd A = scaled_sample(static_cast<int>(state.range(0)));
  const AnalyticFunction f = AnalyticFunction::exponential().drop_affine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_series_entry(f, A, 0, 1, 2.25));
  }
}
BENCHMARK(BM_SeriesEntry)->Arg(256)->Arg(1024);

void BM_EvalContour(benchmark::State& state) {
  const Eigen::MatrixXd A = scaled_sample(static_cast<int>(state.range(0)));
  const AnalyticFunction f = AnalyticFunction::exponential();
  const ContourSpec contour;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_contour(f, A, contour));
  }
}
BENCHMARK(BM_EvalContour)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
