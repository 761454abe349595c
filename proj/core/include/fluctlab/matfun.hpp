// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace fluctlab {

using Complex = std::complex<double>;

// An analytic function represented by its Taylor coefficients
// a_k = f^(k)(0)/k! about the origin, together with a declared lower bound
// on the radius of convergence.
class AnalyticFunction {
 public:
  static AnalyticFunction constant(Complex c);
  static AnalyticFunction monomial(int t);
  // f(z) = coeffs[0] + coeffs[1] z + ...
  static AnalyticFunction polynomial(std::vector<Complex> coeffs,
                                     std::string name = "poly");
  static AnalyticFunction exponential();
  // f(z) = 1/(c - z), radius c; requires c > 0.
  static AnalyticFunction geometric_shifted(double c);
  // Rule-generated coefficients with a declared radius.  The tail bound used
  // by series evaluation assumes |a_k| r^k is summable for r < radius.
  static AnalyticFunction from_rule(std::function<Complex(int)> rule,
                                    double radius, std::string name);

  Complex coefficient(int k) const;
  // Degree for polynomials, -1 for infinite series.
  int degree() const { return degree_; }
  double radius() const { return radius_; }
  const std::string& name() const { return name_; }

  // Scalar series evaluation; |z| must be below the radius.
  Complex operator()(Complex z) const;

  // g(z) = f(z) - a0 - a1 z, dropped analytically.
  AnalyticFunction drop_affine() const;

  // Upper bound on sum_{k > K} |a_k| kappa^k, given the term |a_K| kappa^K.
  // Returns a conservative geometric bound; exact 0 beyond a polynomial's
  // degree.
  double tail_bound(int K, double kappa) const;

 private:
  AnalyticFunction() = default;
  std::function<Complex(int)> rule_;
  int degree_ = -1;
  double radius_ = 0.0;
  std::string name_;
};

// Parses CLI function names: "monomial:t", "exp", "poly:a0,a1,...",
// "geometric-shifted:c".
AnalyticFunction parse_function(const std::string& text);

// Circle about the origin with equispaced trapezoidal quadrature nodes.
struct ContourSpec {
  double radius = 2.5;
  int nodes = 256;
};

struct SeriesResult {
  Eigen::MatrixXcd value;
  double tail_bound = 0.0;
  int terms = 0;
};

// Largest singular value by power iteration on A^T A (A^* A for complex),
// deterministic start vector, relative accuracy tol.
double spectral_norm(const Eigen::MatrixXd& A, double tol = 1e-10,
                     int max_iterations = 20000);
double spectral_norm(const Eigen::MatrixXcd& A, double tol = 1e-10,
                     int max_iterations = 20000);

// sum_k a_k A^k, truncated so the guard-based tail bound is <= 1e-12.
// Throws GuardViolationError when the norm estimate of A exceeds kappa.
// A precomputed norm estimate may be passed to skip the internal power
// iteration; a negative value means "estimate it here".
SeriesResult eval_series(const AnalyticFunction& f, const Eigen::MatrixXcd& A,
                         double kappa, double norm_estimate = -1.0);
SeriesResult eval_series(const AnalyticFunction& f, const Eigen::MatrixXd& A,
                         double kappa, double norm_estimate = -1.0);

// Single entry of sum_k a_k A^k via repeated matrix-vector products; same
// truncation rule and guard as eval_series.
struct SeriesEntryResult {
  Complex value;
  double tail_bound = 0.0;
  int terms = 0;
};
SeriesEntryResult eval_series_entry(const AnalyticFunction& f,
                                    const Eigen::MatrixXd& A, int i, int j,
                                    double kappa, double norm_estimate = -1.0);

// (1/2 pi i) \oint f(z) (zI - A)^{-1} dz over the circle.
Eigen::MatrixXcd eval_contour(const AnalyticFunction& f,
                              const Eigen::MatrixXcd& A,
                              const ContourSpec& contour);
Eigen::MatrixXcd eval_contour(const AnalyticFunction& f,
                              const Eigen::MatrixXd& A,
                              const ContourSpec& contour);

// Dense factor-and-solve resolvent (zI - A)^{-1} with residual check.
Eigen::MatrixXcd resolvent(const Eigen::MatrixXcd& A, Complex z,
                           double residual_tol = 1e-10);
Eigen::MatrixXcd resolvent(const Eigen::MatrixXd& A, Complex z,
                           double residual_tol = 1e-10);

}  // namespace fluctlab
