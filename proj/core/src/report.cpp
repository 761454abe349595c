// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#include "fluctlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fluctlab {
namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

nlohmann::json complex_json(Complex c) {
  return {{"re", c.real()}, {"im", c.imag()}};
}

nlohmann::json statistic_json(const StatisticSpec& s) {
  nlohmann::json j;
  j["kind"] = std::string(statistic_kind_name(s.kind));
  j["id"] = s.id();
  switch (s.kind) {
    case StatisticSpec::Kind::y_entry:
      j["z"] = complex_json(s.z);
      j["i"] = s.i;
      j["j"] = s.j;
      break;
    case StatisticSpec::Kind::f_entry:
      j["f"] = s.function;
      j["i"] = s.i;
      j["j"] = s.j;
      break;
    case StatisticSpec::Kind::s_combination: {
      j["z"] = complex_json(s.z);
      nlohmann::json alphas = nlohmann::json::array();
      nlohmann::json betas = nlohmann::json::array();
      for (Eigen::Index i = 0; i < s.combination.alphas.rows(); ++i) {
        for (Eigen::Index jj = 0; jj < s.combination.alphas.cols(); ++jj) {
          alphas.push_back(complex_json(s.combination.alphas(i, jj)));
          betas.push_back(complex_json(s.combination.betas(i, jj)));
        }
      }
      j["alphas"] = alphas;
      j["betas"] = betas;
      break;
    }
    case StatisticSpec::Kind::trace_kernel:
      j["z"] = complex_json(s.z);
      j["w"] = complex_json(s.w);
      break;
    default:
      break;
  }
  return j;
}

}  // namespace

nlohmann::json report_to_json(const Report& report) {
  const ExperimentConfig& c = report.config;
  nlohmann::json j;
  j["version"] = report.version;
  j["wall_seconds"] = report.wall_seconds;
  j["config"] = {
      {"distribution", std::string(distribution_name(c.ensemble.distribution))},
      {"seed", c.ensemble.seed},
      {"n_grid", c.n_grid},
      {"trials", c.trials},
      {"l", c.l},
      {"guard_kappa", c.guard_kappa},
      {"norm_tol", c.norm_tol},
      {"statistic", statistic_json(c.statistic)},
  };
  j["rows"] = nlohmann::json::array();
  for (const RowReport& r : report.rows) {
    j["rows"].push_back({
        {"n", r.n},
        {"trials", r.trials},
        {"guard_rejects", r.guard_rejects},
        {"accepted", r.accepted},
        {"mean", complex_json(r.mean)},
        {"mean_stderr", r.mean_stderr},
        {"variance", r.variance},
        {"variance_stderr", r.variance_stderr},
        {"theory", complex_json(r.theory)},
        {"abs_dev", r.abs_dev},
        {"rel_dev", r.rel_dev},
        {"ks_distance", r.ks_distance},
        {"p_value", r.p_value},
    });
  }
  return j;
}

std::string summary_csv(const Report& report) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "n,statistic,mean,variance,stderr,theory,abs_dev,rel_dev,p_value,"
        "guard_rejects,trials\n";
  const std::string id = report.config.statistic.id();
  for (const RowReport& r : report.rows) {
    os << r.n << ',' << id << ',' << fmt(r.mean.real()) << ','
       << fmt(r.variance) << ',' << fmt(r.mean_stderr) << ','
       << fmt(r.theory.real()) << ',' << fmt(r.abs_dev) << ','
       << fmt(r.rel_dev) << ',' << fmt(r.p_value) << ',' << r.guard_rejects
       << ',' << r.trials << '\n';
  }
  return os.str();
}

}  // namespace fluctlab
