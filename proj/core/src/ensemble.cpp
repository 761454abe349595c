// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#include "fluctlab/ensemble.hpp"

#include <cmath>
#include <numbers>

#include "fluctlab/errors.hpp"

namespace fluctlab {
namespace {

constexpr std::uint64_t kTruncationSalt = 0x7472756e63ULL;  // "trunc"

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Adaptive Simpson on [a, b].
template <typename F>
double simpson_step(const F& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-13) {
  if (a >= b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

Distribution parse_distribution(std::string_view name) {
  if (name == "gaussian") return Distribution::gaussian;
  if (name == "rademacher") return Distribution::rademacher;
  if (name == "three-point") return Distribution::three_point;
  if (name == "uniform") return Distribution::uniform;
  throw Error("unknown distribution: " + std::string(name));
}

std::string_view distribution_name(Distribution d) {
  switch (d) {
    case Distribution::gaussian: return "gaussian";
    case Distribution::rademacher: return "rademacher";
    case Distribution::three_point: return "three-point";
    case Distribution::uniform: return "uniform";
  }
  return "?";
}

double distribution_fourth_moment(Distribution d) {
  switch (d) {
    case Distribution::gaussian: return 3.0;
    case Distribution::rademacher: return 1.0;
    case Distribution::three_point: return 2.0;   // (1/2) * sqrt(2)^4
    case Distribution::uniform: return 9.0 / 5.0; // E x^4 of U[-sqrt3, sqrt3]
  }
  return 0.0;
}

bool is_discrete(Distribution d) {
  return d == Distribution::rademacher || d == Distribution::three_point;
}

DiscreteSupport discrete_support(Distribution d) {
  const double s2 = std::sqrt(2.0);
  switch (d) {
    case Distribution::rademacher:
      return {{-1.0, 1.0}, {0.5, 0.5}};
    case Distribution::three_point:
      return {{-s2, 0.0, s2}, {0.25, 0.5, 0.25}};
    default:
      return {};
  }
}

double draw(Distribution d, SubstreamRng& rng) {
  switch (d) {
    case Distribution::gaussian:
      return rng.gaussian();
    case Distribution::rademacher:
      return (rng.next() & 1) ? 1.0 : -1.0;
    case Distribution::three_point: {
      const double u = rng.uniform01();
      if (u < 0.25) return std::sqrt(2.0);
      if (u < 0.5) return -std::sqrt(2.0);
      return 0.0;
    }
    case Distribution::uniform:
      return (2.0 * rng.uniform01() - 1.0) * std::sqrt(3.0);
  }
  return 0.0;
}

double TruncationPolicy::eps(int n) const {
  return eps_n > 0.0 ? eps_n : std::pow(static_cast<double>(n), -0.125);
}

double TruncationPolicy::bulk_threshold(int n) const {
  return eps(n) * std::sqrt(static_cast<double>(n));
}

double TruncationPolicy::band_threshold(int n) const {
  return eps(n) * std::pow(static_cast<double>(n), 0.25);
}

ClippedMoments clipped_moments(Distribution d, double threshold) {
  if (threshold <= 0.0) return {0.0, 0.0, 0.0};
  if (is_discrete(d)) {
    const DiscreteSupport s = discrete_support(d);
    double mass = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      if (std::abs(s.points[k]) <= threshold) {
        mass += s.probabilities[k];
        m1 += s.probabilities[k] * s.points[k];
        m2 += s.probabilities[k] * s.points[k] * s.points[k];
      }
    }
    if (mass == 0.0) return {0.0, 0.0, 0.0};
    const double mean = m1 / mass;
    return {mass, mean, m2 / mass - mean * mean};
  }
  if (d == Distribution::uniform) {
    const double half = std::sqrt(3.0);
    const double a = std::min(threshold, half);
    return {a / half, 0.0, a * a / 3.0};
  }
  // Gaussian: 1D quadrature on [-t, t].
  const double t = threshold;
  const double mass = integrate([](double x) { return normal_pdf(x); }, -t, t);
  const double m1 = integrate([](double x) { return x * normal_pdf(x); }, -t, t);
  const double m2 =
      integrate([](double x) { return x * x * normal_pdf(x); }, -t, t);
  const double mean = m1 / mass;
  return {mass, mean, m2 / mass - mean * mean};
}

Eigen::MatrixXd sample_matrix(const EnsembleSpec& spec) {
  if (spec.n < 1) throw InvalidDimensionError("sample_matrix: n must be >= 1");
  SubstreamRng rng(spec.seed, spec.stream_id);
  Eigen::MatrixXd m(spec.n, spec.n);
  // Row-major fill so the draw order is part of the reproducibility contract.
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      m(i, j) = draw(spec.distribution, rng);
    }
  }
  return m;
}

Eigen::MatrixXd truncate(const Eigen::MatrixXd& M, const EnsembleSpec& spec,
                         const TruncationPolicy& policy) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n) throw InvalidDimensionError("truncate: matrix not square");
  if (policy.l > n) throw InvalidDimensionError("truncate: l exceeds n");

  const double t_band = policy.band_threshold(n);
  const double t_bulk = policy.bulk_threshold(n);

  const ClippedMoments band = clipped_moments(spec.distribution, t_band);
  const ClippedMoments bulk = clipped_moments(spec.distribution, t_bulk);
  for (const ClippedMoments& cm : {band, bulk}) {
    if (cm.mass <= 0.0 || cm.variance <= 1e-14) {
      throw DegenerateTruncationError(
          "truncate: clipped distribution is degenerate at threshold");
    }
  }

  // Out-of-threshold entries are redrawn from the law conditioned on the
  // threshold, using a dedicated substream derived from the ensemble spec.
  SubstreamRng rng(spec.seed, spec.stream_id, kTruncationSalt);
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool in_band = i < policy.l || j < policy.l;
      const double t = in_band ? t_band : t_bulk;
      const ClippedMoments& cm = in_band ? band : bulk;
      double x = M(i, j);
      while (std::abs(x) > t) x = draw(spec.distribution, rng);
      if (policy.restandardize) x = (x - cm.mean) / std::sqrt(cm.variance);
      out(i, j) = x;
    }
  }
  return out;
}

BlockDecomposition block_decompose(const Eigen::MatrixXd& M, int l) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n) {
    throw InvalidDimensionError("block_decompose: matrix not square");
  }
  if (l < 1 || l >= n) {
    throw InvalidDimensionError("block_decompose: need 1 <= l < n");
  }
  BlockDecomposition b;
  b.X = M.topLeftCorner(l, l);
  b.psi = M.topRightCorner(l, n - l);
  b.phi = M.bottomLeftCorner(n - l, l);
  b.M_lower = M.bottomRightCorner(n - l, n - l);
  return b;
}

}  // namespace fluctlab
