// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#include "fluctlab/matfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fluctlab/errors.hpp"

namespace fluctlab {
namespace {

constexpr double kSeriesTailTol = 1e-12;
constexpr int kSeriesTermCap = 2000;

std::vector<Complex> parse_coeff_list(const std::string& text) {
  std::vector<Complex> coeffs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    coeffs.emplace_back(std::stod(tok), 0.0);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return coeffs;
}

}  // namespace

AnalyticFunction AnalyticFunction::constant(Complex c) {
  return polynomial({c}, "constant");
}

AnalyticFunction AnalyticFunction::monomial(int t) {
  std::vector<Complex> coeffs(static_cast<std::size_t>(t) + 1, Complex{0.0});
  coeffs.back() = 1.0;
  return polynomial(std::move(coeffs), "monomial:" + std::to_string(t));
}

AnalyticFunction AnalyticFunction::polynomial(std::vector<Complex> coeffs,
                                              std::string name) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  AnalyticFunction f;
  f.degree_ = static_cast<int>(coeffs.size()) - 1;
  f.radius_ = std::numeric_limits<double>::infinity();
  f.name_ = std::move(name);
  f.rule_ = [c = std::move(coeffs)](int k) {
    return k < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(k)]
                                          : Complex{0.0};
  };
  return f;
}

AnalyticFunction AnalyticFunction::exponential() {
  AnalyticFunction f;
  f.degree_ = -1;
  f.radius_ = std::numeric_limits<double>::infinity();
  f.name_ = "exp";
  f.rule_ = [](int k) {
    double a = 1.0;
    for (int i = 2; i <= k; ++i) a /= i;
    return Complex{a};
  };
  return f;
}

AnalyticFunction AnalyticFunction::geometric_shifted(double c) {
  if (c <= 0.0) throw Error("geometric-shifted: c must be positive");
  AnalyticFunction f;
  f.degree_ = -1;
  f.radius_ = c;
  f.name_ = "geometric-shifted:" + std::to_string(c);
  // 1/(c - z) = sum_k z^k / c^{k+1}
  f.rule_ = [c](int k) { return Complex{std::pow(c, -(k + 1))}; };
  return f;
}

AnalyticFunction AnalyticFunction::from_rule(std::function<Complex(int)> rule,
                                             double radius, std::string name) {
  AnalyticFunction f;
  f.degree_ = -1;
  f.radius_ = radius;
  f.name_ = std::move(name);
  f.rule_ = std::move(rule);
  return f;
}

Complex AnalyticFunction::coefficient(int k) const { return rule_(k); }

double AnalyticFunction::tail_bound(int K, double kappa) const {
  if (degree_ >= 0) {
    if (K >= degree_) return 0.0;
    double tail = 0.0;
    for (int k = K + 1; k <= degree_; ++k) {
      tail += std::abs(coefficient(k)) * std::pow(kappa, k);
    }
    return tail;
  }
  // Lookahead window plus a geometric majorant for the remainder; for
  // entire functions (exp) the effective ratio kappa/(k+1) is used instead.
  constexpr int kWindow = 8;
  double tail = 0.0;
  double last = 0.0;
  for (int k = K + 1; k <= K + kWindow; ++k) {
    last = std::abs(coefficient(k)) * std::pow(kappa, k);
    tail += last;
  }
  const double q = std::isfinite(radius_)
                       ? kappa / radius_
                       : kappa / static_cast<double>(K + kWindow + 1);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return tail + last * q / (1.0 - q);
}

Complex AnalyticFunction::operator()(Complex z) const {
  const double r = std::abs(z);
  if (r >= radius_) throw Error(name_ + ": evaluation outside radius");
  Complex sum = coefficient(0);
  Complex zk = 1.0;
  for (int k = 1; k <= kSeriesTermCap; ++k) {
    zk *= z;
    sum += coefficient(k) * zk;
    if (tail_bound(k, r) <= 1e-16 * (1.0 + std::abs(sum))) return sum;
  }
  throw ConvergenceFailureError(name_ + ": scalar series did not converge",
                                std::abs(sum));
}

AnalyticFunction AnalyticFunction::drop_affine() const {
  AnalyticFunction g;
  g.degree_ = degree_ >= 2 ? degree_ : (degree_ >= 0 ? 0 : -1);
  g.radius_ = radius_;
  g.name_ = name_ + "-tail";
  g.rule_ = [base = rule_](int k) { return k < 2 ? Complex{0.0} : base(k); };
  return g;
}

AnalyticFunction parse_function(const std::string& text) {
  if (text == "exp") return AnalyticFunction::exponential();
  const std::size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (head == "monomial") return AnalyticFunction::monomial(std::stoi(arg));
  if (head == "poly") {
    return AnalyticFunction::polynomial(parse_coeff_list(arg), "poly:" + arg);
  }
  if (head == "geometric-shifted") {
    return AnalyticFunction::geometric_shifted(std::stod(arg));
  }
  throw Error("unknown function: " + text);
}

namespace {

template <typename Matrix>
double spectral_norm_impl(const Matrix& A, double tol, int max_iterations) {
  const auto n = A.rows();
  if (n == 0 || A.cols() == 0) return 0.0;
  using Vector = Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>;
  Vector v = Vector::Ones(A.cols());
  v /= v.norm();
  double sigma = 0.0;
  int settled = 0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector u = A * v;
    const double s = u.norm();
    if (s == 0.0) return 0.0;
    v = A.adjoint() * u;
    const double vn = v.norm();
    if (vn == 0.0) return s;
    v /= vn;
    const double prev = sigma;
    sigma = std::sqrt(vn);  // |A^* A v| -> sigma_1^2 for unit v
    if (it > 0 && std::abs(sigma - prev) <= tol * sigma) {
      if (++settled >= 2) return sigma;
    } else {
      settled = 0;
    }
  }
  throw ConvergenceFailureError("spectral_norm: power iteration hit cap",
                                sigma);
}

}  // namespace

double spectral_norm(const Eigen::MatrixXd& A, double tol, int max_iterations) {
  return spectral_norm_impl(A, tol, max_iterations);
}

double spectral_norm(const Eigen::MatrixXcd& A, double tol,
                     int max_iterations) {
  return spectral_norm_impl(A, tol, max_iterations);
}

namespace {

void check_guard(const AnalyticFunction& f, double norm_estimate,
                 double kappa) {
  if (kappa >= f.radius()) {
    throw Error("eval_series: kappa must be below the radius of " + f.name());
  }
  if (norm_estimate > kappa) {
    throw GuardViolationError("eval_series: norm estimate exceeds guard");
  }
}

}  // namespace

SeriesResult eval_series(const AnalyticFunction& f, const Eigen::MatrixXcd& A,
                         double kappa, double norm_estimate) {
  if (A.rows() != A.cols()) {
    throw InvalidDimensionError("eval_series: matrix not square");
  }
  if (norm_estimate < 0.0) norm_estimate = spectral_norm(A, 1e-8);
  check_guard(f, norm_estimate, kappa);
  const auto n = A.rows();
  Eigen::MatrixXcd sum =
      f.coefficient(0) * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= kSeriesTermCap; ++k) {
    power = power * A;
    sum += f.coefficient(k) * power;
    const double tail = f.tail_bound(k, kappa);
    if (tail <= kSeriesTailTol) return {std::move(sum), tail, k + 1};
  }
  throw ConvergenceFailureError("eval_series: term cap reached", 0.0);
}

SeriesResult eval_series(const AnalyticFunction& f, const Eigen::MatrixXd& A,
                         double kappa, double norm_estimate) {
  return eval_series(f, Eigen::MatrixXcd(A.cast<Complex>()), kappa,
                     norm_estimate);
}

SeriesEntryResult eval_series_entry(const AnalyticFunction& f,
                                    const Eigen::MatrixXd& A, int i, int j,
                                    double kappa, double norm_estimate) {
  const auto n = A.rows();
  if (A.cols() != n || i < 0 || j < 0 || i >= n || j >= n) {
    throw InvalidDimensionError("eval_series_entry: bad shape or index");
  }
  if (norm_estimate < 0.0) norm_estimate = spectral_norm(A, 1e-8);
  check_guard(f, norm_estimate, kappa);
  Complex value = f.coefficient(0) * (i == j ? 1.0 : 0.0);
  {
    const double tail = f.tail_bound(0, kappa);
    if (tail <= kSeriesTailTol) return {value, tail, 1};
  }
  Eigen::VectorXd w = Eigen::VectorXd::Unit(n, j);
  for (int k = 1; k <= kSeriesTermCap; ++k) {
    w = A * w;
    value += f.coefficient(k) * w(i);
    const double tail = f.tail_bound(k, kappa);
    if (tail <= kSeriesTailTol) return {value, tail, k + 1};
  }
  throw ConvergenceFailureError("eval_series_entry: term cap reached", 0.0);
}

Eigen::MatrixXcd eval_contour(const AnalyticFunction& f,
                              const Eigen::MatrixXcd& A,
                              const ContourSpec& contour) {
  if (A.rows() != A.cols()) {
    throw InvalidDimensionError("eval_contour: matrix not square");
  }
  if (contour.radius >= f.radius()) {
    throw Error("eval_contour: contour radius must be below the radius of " +
                f.name());
  }
  if (spectral_norm(A, 1e-8) >= contour.radius) {
    throw GuardViolationError("eval_contour: norm estimate reaches contour");
  }
  const auto n = A.rows();
  const int N = contour.nodes;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  // Trapezoidal rule on the circle: (1/N) sum_j f(z_j) z_j (z_j I - A)^{-1};
  // fixed node order keeps the summation bitwise reproducible.
  for (int jn = 0; jn < N; ++jn) {
    const double theta = 2.0 * std::numbers::pi * jn / N;
    const Complex z = contour.radius * Complex{std::cos(theta), std::sin(theta)};
    sum += f(z) * z * resolvent(A, z, 1e-8);
  }
  return sum / static_cast<double>(N);
}

Eigen::MatrixXcd eval_contour(const AnalyticFunction& f,
                              const Eigen::MatrixXd& A,
                              const ContourSpec& contour) {
  return eval_contour(f, Eigen::MatrixXcd(A.cast<Complex>()), contour);
}

Eigen::MatrixXcd resolvent(const Eigen::MatrixXcd& A, Complex z,
                           double residual_tol) {
  const auto n = A.rows();
  if (A.cols() != n) {
    throw InvalidDimensionError("resolvent: matrix not square");
  }
  const Eigen::MatrixXcd shifted =
      z * Eigen::MatrixXcd::Identity(n, n) - A;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
  Eigen::MatrixXcd R = lu.inverse();
  const double residual =
      (shifted * R - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > residual_tol) {
    throw SingularResolventError("resolvent: residual " +
                                 std::to_string(residual));
  }
  return R;
}

Eigen::MatrixXcd resolvent(const Eigen::MatrixXd& A, Complex z,
                           double residual_tol) {
  const auto n = A.rows();
  if (A.cols() != n) {
    throw InvalidDimensionError("resolvent: matrix not square");
  }
  if (z.imag() != 0.0) {
    return resolvent(Eigen::MatrixXcd(A.cast<Complex>()), z, residual_tol);
  }
  // Real shift: factor in real arithmetic, roughly 4x cheaper.
  const Eigen::MatrixXd shifted =
      z.real() * Eigen::MatrixXd::Identity(n, n) - A;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  Eigen::MatrixXd R = lu.inverse();
  const double residual =
      (shifted * R - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > residual_tol) {
    throw SingularResolventError("resolvent: residual " +
                                 std::to_string(residual));
  }
  return R.cast<Complex>();
}

}  // namespace fluctlab
