// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#include "fluctlab/oracles.hpp"

#include <cmath>

#include "fluctlab/errors.hpp"
#include "fluctlab/matfun.hpp"

namespace fluctlab {

double trace_identity_enumerate(const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(B.rows());
  if (B.cols() != n) {
    throw InvalidDimensionError("trace_identity_enumerate: matrix not square");
  }
  if (n > 8) {
    throw EnumerationTooLargeError(
        "trace_identity_enumerate: n > 8 would enumerate > 2^16 patterns");
  }
  const std::uint32_t patterns = 1u << n;
  double total = 0.0;
  Eigen::VectorXd u(n), v(n);
  for (std::uint32_t bu = 0; bu < patterns; ++bu) {
    for (int i = 0; i < n; ++i) u(i) = (bu >> i) & 1 ? 1.0 : -1.0;
    const Eigen::RowVectorXd utB = u.transpose() * B;
    for (std::uint32_t bv = 0; bv < patterns; ++bv) {
      for (int i = 0; i < n; ++i) v(i) = (bv >> i) & 1 ? 1.0 : -1.0;
      const double q = utB * v;
      total += q * q;
    }
  }
  const double patterns_total =
      static_cast<double>(patterns) * static_cast<double>(patterns);
  return total / patterns_total / n;
}

void validate(const QuadraticFormSpec& spec) {
  for (const Eigen::MatrixXd& B : spec.b_list) {
    if (spectral_norm(B, 1e-8) > spec.norm_bound * (1.0 + 1e-9)) {
      throw SpecViolationError("qf spec: ||B|| exceeds declared bound");
    }
  }
}

Eigen::VectorXd qf_clt_sample(const QuadraticFormSpec& spec, std::uint64_t seed,
                              std::uint64_t stream_id) {
  const int r = static_cast<int>(spec.b_list.size());
  Eigen::VectorXd z(r);
  for (int s = 0; s < r; ++s) {
    const Eigen::MatrixXd& B = spec.b_list[static_cast<std::size_t>(s)];
    const int n = static_cast<int>(B.rows());
    SubstreamRng rng(seed, stream_id, 0x716600ULL + static_cast<std::uint64_t>(s));
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) x(i) = draw(spec.distribution, rng);
    for (int i = 0; i < n; ++i) y(i) = draw(spec.distribution, rng);
    z(s) = x.dot(B * y) / std::sqrt(static_cast<double>(n));
  }
  return z;
}

std::vector<double> qf_clt_variances(const QuadraticFormSpec& spec) {
  std::vector<double> a2;
  a2.reserve(spec.b_list.size());
  for (const Eigen::MatrixXd& B : spec.b_list) {
    a2.push_back((B.transpose() * B).trace() /
                 static_cast<double>(B.rows()));
  }
  return a2;
}

int qf_bound_threshold(Distribution d) {
  // |x| <= eps_n n^{1/4} = n^{1/8} under the default rule, so n >= bound^8.
  switch (d) {
    case Distribution::rademacher: return 1;
    case Distribution::three_point: return 16;   // sqrt(2)^8
    case Distribution::uniform: return 81;       // sqrt(3)^8
    case Distribution::gaussian: return 0;       // unbounded
  }
  return 0;
}

}  // namespace fluctlab
