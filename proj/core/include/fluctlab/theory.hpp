// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include "fluctlab/matfun.hpp"

namespace fluctlab {

// Limiting covariance E[Y(z)_ij conj(Y(w)_ij)] = 1/(z^2 wbar^2 (z wbar - 1)).
Complex kernel_Y(Complex z, Complex w);

// Derived identity for real matrices: the non-conjugated same-entry moment
// E[Y(z)_ij Y(w)_ij] = kernel_Y(z, conj(w)).
Complex kernel_Y_unconjugated(Complex z, Complex w);

struct SeriesSum {
  Complex value;
  double tail_bound = 0.0;
  int terms = 0;
};

// E[Z(f) conj(Z(g))] = sum_{r>=2} a_r(f) conj(a_r(g)), accumulated until the
// term magnitude drops below 1e-16.
SeriesSum covariance_Z(const AnalyticFunction& f, const AnalyticFunction& g);

// Double-contour form of the same covariance:
// (1/2pi)^2 oint oint f(z)/z^2 conj(g(w)/w^2) / (z wbar - 1) dz dwbar.
Complex covariance_Z_contour(const AnalyticFunction& f,
                             const AnalyticFunction& g,
                             const ContourSpec& contour);

// The three limiting real/imaginary trace kernels; with
// g(z,w) = 1/(z^2 w^2 (zw-1)):
//   re_re =  (1/4) [g(z,w) + g(z,wb) + g(zb,w) + g(zb,wb)]
//   im_im = -(1/4) [g(z,w) - g(z,wb) - g(zb,w) + g(zb,wb)]
//   re_im = (1/4i) [g(z,w) - g(z,wb) + g(zb,w) - g(zb,wb)]
struct RealKernels {
  Complex re_re;
  Complex im_im;
  Complex re_im;
};
RealKernels real_kernels(Complex z, Complex w);

// E|S(z)|^2 for S = sum alpha_ij Re Y_ij + beta_ij Im Y_ij, assembled from
// real_kernels by bilinearity and cross-entry independence.
Complex combination_variance(const Eigen::MatrixXcd& alphas,
                             const Eigen::MatrixXcd& betas, Complex z);

}  // namespace fluctlab
