// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#include "fluctlab/theory.hpp"

#include <cmath>
#include <numbers>

#include "fluctlab/errors.hpp"

namespace fluctlab {
namespace {

constexpr int kCovarianceTermCap = 400;

Complex base_kernel(Complex z, Complex w) {
  const Complex zw = z * w;
  if (std::abs(zw - 1.0) < 1e-12) throw Error("kernel: pole at zw = 1");
  return 1.0 / (z * z * w * w * (zw - 1.0));
}

}  // namespace

Complex kernel_Y(Complex z, Complex w) { return base_kernel(z, std::conj(w)); }

Complex kernel_Y_unconjugated(Complex z, Complex w) {
  return kernel_Y(z, std::conj(w));
}

SeriesSum covariance_Z(const AnalyticFunction& f, const AnalyticFunction& g) {
  const int max_degree =
      (f.degree() >= 0 && g.degree() >= 0)
          ? std::min(f.degree(), g.degree())
          : (f.degree() >= 0 ? f.degree()
                             : (g.degree() >= 0 ? g.degree() : -1));
  Complex sum = 0.0;
  int small_run = 0;
  int terms = 0;
  double last = 0.0;
  for (int r = 2; r <= kCovarianceTermCap; ++r) {
    if (max_degree >= 0 && r > max_degree) {
      return {sum, 0.0, terms};  // finite series, tail exactly zero
    }
    const Complex term = f.coefficient(r) * std::conj(g.coefficient(r));
    sum += term;
    ++terms;
    last = std::abs(term);
    small_run = last < 1e-16 ? small_run + 1 : 0;
    if (small_run >= 8) return {sum, 8.0 * last, terms};
  }
  if (max_degree < 0 && last >= 1e-16) {
    throw Error("covariance_Z: series did not converge within term cap");
  }
  return {sum, last, terms};
}

Complex covariance_Z_contour(const AnalyticFunction& f,
                             const AnalyticFunction& g,
                             const ContourSpec& contour) {
  if (contour.radius >= f.radius() || contour.radius >= g.radius()) {
    throw Error("covariance_Z_contour: contour outside analyticity disk");
  }
  const int N = contour.nodes;
  const double r = contour.radius;
  std::vector<Complex> z(N), fz(N), gw(N);
  for (int j = 0; j < N; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / N;
    z[j] = r * Complex{std::cos(theta), std::sin(theta)};
    fz[j] = f(z[j]);
    gw[j] = g(z[j]);
  }
  Complex sum = 0.0;
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) {
      const Complex wb = std::conj(z[k]);
      const Complex zw = z[j] * wb;
      sum += fz[j] * std::conj(gw[k]) * zw / (z[j] * z[j] * wb * wb * (zw - 1.0));
    }
  }
  return sum / static_cast<double>(N) / static_cast<double>(N);
}

RealKernels real_kernels(Complex z, Complex w) {
  const Complex zb = std::conj(z), wb = std::conj(w);
  const Complex a = base_kernel(z, w);
  const Complex b = base_kernel(z, wb);
  const Complex c = base_kernel(zb, w);
  const Complex d = base_kernel(zb, wb);
  RealKernels k;
  k.re_re = 0.25 * (a + b + c + d);
  k.im_im = -0.25 * (a - b - c + d);
  k.re_im = (a - b + c - d) / Complex{0.0, 4.0};
  return k;
}

Complex combination_variance(const Eigen::MatrixXcd& alphas,
                             const Eigen::MatrixXcd& betas, Complex z) {
  if (alphas.rows() != betas.rows() || alphas.cols() != betas.cols()) {
    throw InvalidDimensionError("combination_variance: shape mismatch");
  }
  const RealKernels k = real_kernels(z, z);
  Complex total = 0.0;
  for (Eigen::Index i = 0; i < alphas.rows(); ++i) {
    for (Eigen::Index j = 0; j < alphas.cols(); ++j) {
      const Complex a = alphas(i, j), b = betas(i, j);
      total += std::norm(a) * k.re_re + std::norm(b) * k.im_im +
               (a * std::conj(b) + std::conj(a) * b) * k.re_im;
    }
  }
  return total;
}

}  // namespace fluctlab
