// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "fluctlab/matfun.hpp"

namespace fluctlab {

// One Monte Carlo draw of a scalar fluctuation statistic.  guard_ok = false
// means the spectral-norm guard failed; the value is recorded but excluded
// from limit-theorem aggregation.
struct FluctuationSample {
  Complex value{0.0};
  Complex z{0.0};
  bool guard_ok = true;
  long trial_id = -1;
  int n = 0;
};

struct YSample {
  Eigen::MatrixXcd value;  // l x l
  bool guard_ok = true;
  double norm_estimate = 0.0;
};

struct CombinationSpec {
  Eigen::MatrixXcd alphas;
  Eigen::MatrixXcd betas;
};

// Y_n(z) = sqrt(n) [ R(z)_ij - delta_ij / z - m_ij / (z^2 sqrt(n)) ] for
// i,j < l, where R is the resolvent of M/sqrt(n).  Indices are 0-based.
// A precomputed spectral-norm estimate of M/sqrt(n) may be passed to skip
// the internal power iteration; a negative value means "estimate it here".
YSample stat_Y(const Eigen::MatrixXd& M, Complex z, int l, double kappa,
               double norm_tol = 1e-6, double norm_estimate = -1.0);

// sqrt(n) ( f(M/sqrt(n))_ij - f(0) delta_ij - f'(0) m_ij / sqrt(n) ),
// computed as sqrt(n) g(M/sqrt(n))_ij with g = f minus its affine part, so
// the subtraction is exact by construction.
FluctuationSample stat_f(const Eigen::MatrixXd& M, const AnalyticFunction& f,
                         int i, int j, double kappa, double norm_tol = 1e-6,
                         double norm_estimate = -1.0);

// Cross-check route for stat_f through contour integration of the resolvent.
FluctuationSample stat_f_contour(const Eigen::MatrixXd& M,
                                 const AnalyticFunction& f, int i, int j,
                                 double kappa, const ContourSpec& contour,
                                 double norm_tol = 1e-6);

// S = sum_ij alpha_ij Re(Y_ij) + beta_ij Im(Y_ij).
Complex stat_S(const Eigen::MatrixXcd& Y, const CombinationSpec& spec);

struct TraceKernelSample {
  Complex value{0.0};
  bool guard_ok = true;
};

// (1/n) tr( R(z) R(w)^T ) for the resolvent of M/sqrt(n).
TraceKernelSample stat_trace_kernel(const Eigen::MatrixXd& M, Complex z,
                                    Complex w, double kappa,
                                    double norm_tol = 1e-6);

}  // namespace fluctlab
