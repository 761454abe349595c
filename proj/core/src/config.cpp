// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
#include "fluctlab/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fluctlab/errors.hpp"

namespace fluctlab {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_ini(std::istream& in) {
  KeyValues kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno),
                          "unterminated section header at line " +
                              std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno),
                        "expected key = value at line " +
                            std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    kv[section.empty() ? key : section + "." + key] =
        trim(line.substr(eq + 1));
  }
  return kv;
}

std::string require(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw ConfigError(key, "missing required config field: " + key);
  }
  return it->second;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, "field " + key + ": not a number: " + value);
  }
}

long to_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "field " + key + ": not an integer: " + value);
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(text);
  while (std::getline(is, tok, sep)) out.push_back(trim(tok));
  return out;
}

std::optional<double> optional_double(const KeyValues& kv,
                                      const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) return std::nullopt;
  return to_double(key, it->second);
}

Eigen::MatrixXcd parse_real_matrix(const KeyValues& kv, const std::string& key,
                                   int l) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    return Eigen::MatrixXcd::Zero(l, l);
  }
  const auto toks = split(it->second, ',');
  if (static_cast<int>(toks.size()) != l * l) {
    throw ConfigError(key, "field " + key + ": expected " +
                               std::to_string(l * l) + " entries");
  }
  Eigen::MatrixXcd m(l, l);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      m(i, j) = to_double(key, toks[static_cast<std::size_t>(i * l + j)]);
    }
  }
  return m;
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  const KeyValues kv = parse_ini(in);
  RunConfig rc;
  ExperimentConfig& ex = rc.experiment;

  ex.ensemble.distribution =
      parse_distribution(require(kv, "ensemble.distribution"));
  ex.ensemble.seed = static_cast<std::uint64_t>(
      to_long("ensemble.seed", require(kv, "ensemble.seed")));

  for (const std::string& tok :
       split(require(kv, "experiment.n-grid"), ',')) {
    const long n = to_long("experiment.n-grid", tok);
    if (n < 1) throw ConfigError("experiment.n-grid", "n must be >= 1");
    ex.n_grid.push_back(static_cast<int>(n));
  }
  ex.trials = to_long("experiment.trials", require(kv, "experiment.trials"));
  if (auto it = kv.find("experiment.l"); it != kv.end()) {
    ex.l = static_cast<int>(to_long("experiment.l", it->second));
  }
  if (auto v = optional_double(kv, "experiment.guard-kappa")) {
    ex.guard_kappa = *v;
  }
  if (auto v = optional_double(kv, "experiment.norm-tol")) ex.norm_tol = *v;
  if (auto it = kv.find("experiment.workers"); it != kv.end()) {
    ex.workers = static_cast<int>(to_long("experiment.workers", it->second));
  }

  StatisticSpec& st = ex.statistic;
  st.kind = parse_statistic_kind(require(kv, "statistic.kind"));
  auto read_complex = [&](const std::string& re_key,
                          const std::string& im_key) {
    const double re = to_double(re_key, require(kv, re_key));
    double im = 0.0;
    if (auto v = optional_double(kv, im_key)) im = *v;
    return Complex{re, im};
  };
  switch (st.kind) {
    case StatisticSpec::Kind::y_entry:
    case StatisticSpec::Kind::s_combination:
      st.z = read_complex("statistic.z", "statistic.z-im");
      break;
    case StatisticSpec::Kind::trace_kernel:
      st.z = read_complex("statistic.z", "statistic.z-im");
      st.w = read_complex("statistic.w", "statistic.w-im");
      break;
    case StatisticSpec::Kind::f_entry:
      st.function = require(kv, "statistic.f");
      break;
    default:
      break;
  }
  if (st.kind == StatisticSpec::Kind::y_entry ||
      st.kind == StatisticSpec::Kind::f_entry) {
    // 1-based in the file.
    st.i = static_cast<int>(to_long("statistic.i", require(kv, "statistic.i"))) - 1;
    st.j = static_cast<int>(to_long("statistic.j", require(kv, "statistic.j"))) - 1;
    if (st.i < 0 || st.j < 0) {
      throw ConfigError("statistic.i", "tracked indices are 1-based");
    }
  }
  if (st.kind == StatisticSpec::Kind::s_combination) {
    st.combination.alphas = parse_real_matrix(kv, "statistic.alphas", ex.l);
    st.combination.betas = parse_real_matrix(kv, "statistic.betas", ex.l);
  }

  rc.checks.mean_tol = optional_double(kv, "check.mean-tol");
  rc.checks.variance_rel_tol = optional_double(kv, "check.variance-rel-tol");
  rc.checks.p_min = optional_double(kv, "check.p-min");
  rc.checks.max_guard_reject_rate =
      optional_double(kv, "check.max-guard-reject-rate");
  return rc;
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return parse_run_config(in);
}

std::vector<std::string> evaluate_checks(const Report& report,
                                         const CheckSpec& checks) {
  std::vector<std::string> failures;
  for (const RowReport& row : report.rows) {
    const std::string where = "n=" + std::to_string(row.n);
    if (checks.mean_tol) {
      const double dev = std::abs(row.mean - row.theory);
      // mean-tol is meant for statistics whose limiting mean is the theory
      // column (trace-kernel, norm); for CLT kinds it bounds |mean|.
      const bool clt = report.config.statistic.kind ==
                           StatisticSpec::Kind::y_entry ||
                       report.config.statistic.kind ==
                           StatisticSpec::Kind::f_entry ||
                       report.config.statistic.kind ==
                           StatisticSpec::Kind::s_combination;
      const double value = clt ? std::abs(row.mean) : dev;
      if (value > *checks.mean_tol) {
        failures.push_back(where + ": mean deviation " +
                           std::to_string(value) + " > tol");
      }
    }
    if (checks.variance_rel_tol && row.theory.real() > 0.0) {
      const double rel =
          std::abs(row.variance - row.theory.real()) / row.theory.real();
      if (rel > *checks.variance_rel_tol) {
        failures.push_back(where + ": variance rel dev " +
                           std::to_string(rel) + " > tol");
      }
    }
    if (checks.p_min && !std::isnan(row.p_value) &&
        row.p_value < *checks.p_min) {
      failures.push_back(where + ": p-value " + std::to_string(row.p_value) +
                         " below threshold");
    }
    if (checks.max_guard_reject_rate && row.trials > 0) {
      const double rate = static_cast<double>(row.guard_rejects) /
                          static_cast<double>(row.trials);
      if (rate > *checks.max_guard_reject_rate) {
        failures.push_back(where + ": guard-reject rate " +
                           std::to_string(rate) + " too high");
      }
    }
  }
  return failures;
}

}  // namespace fluctlab
