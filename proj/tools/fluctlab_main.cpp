// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: runs Monte Carlo experiments from config files,
// the deterministic theory-identity suite, and the exact enumeration
// oracles.  Exit codes: 0 pass, 2 check failure, 64 config error, 74 I/O
// error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fluctlab/config.hpp"
#include "fluctlab/errors.hpp"
#include "fluctlab/harness.hpp"
#include "fluctlab/oracles.hpp"
#include "fluctlab/report.hpp"
#include "fluctlab/theory.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 2;
constexpr int kExitConfig = 64;
constexpr int kExitIo = 74;

using namespace fluctlab;

int resolve_workers(int flag_value) {
  if (const char* env = std::getenv("FLUCTLAB_WORKERS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw ConfigError("FLUCTLAB_WORKERS", "FLUCTLAB_WORKERS is not an integer");
    }
  }
  return std::max(1, flag_value);
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::string& format, int workers, long seed_override,
            bool have_seed) {
  RunConfig rc = parse_run_config_file(config_path);
  rc.experiment.workers = workers;
  if (have_seed) {
    rc.experiment.ensemble.seed = static_cast<std::uint64_t>(seed_override);
  }

  const Report report = run_experiment(rc.experiment);

  std::filesystem::create_directories(out_dir);
  const auto write_file = [&](const std::string& name,
                              const std::string& body) {
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw IoError("cannot write " + path.string());
  };
  if (format == "json" || format == "both") {
    write_file("report.json", report_to_json(report).dump(2) + "\n");
  }
  if (format == "csv" || format == "both") {
    write_file("summary.csv", summary_csv(report));
  }
  std::cout << summary_csv(report);

  const std::vector<std::string> failures =
      evaluate_checks(report, rc.checks);
  for (const std::string& f : failures) {
    std::cerr << "check failed: " << f << "\n";
  }
  return failures.empty() ? kExitPass : kExitCheckFailure;
}

struct CheckTable {
  int failures = 0;
  void row(const std::string& name, bool ok, double value = std::nan("")) {
    std::cout << (ok ? "PASS  " : "FAIL  ") << name;
    if (!std::isnan(value)) std::cout << "  (" << value << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  }
};

Eigen::MatrixXd random_matrix(int n, SubstreamRng& rng) {
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = 2.0 * rng.uniform01() - 1.0;
  }
  return A;
}

Eigen::MatrixXd random_matrix_with_norm(int n, double norm,
                                        SubstreamRng& rng) {
  Eigen::MatrixXd A = random_matrix(n, rng);
  return A * (norm / spectral_norm(A, 1e-10));
}

int cmd_verify_theory() {
  CheckTable t;
  const Complex k33 = kernel_Y(3.0, 3.0);
  t.row("kernel_Y(3,3) = 1/648", std::abs(k33 - 1.0 / 648.0) <= 1e-14,
        k33.real());

  bool herm = true, positive = true;
  for (double zr : {2.5, 3.0, 4.0}) {
    for (double zi : {-1.0, 0.0, 2.0}) {
      for (double wr : {2.5, 3.5}) {
        for (double wi : {0.0, 1.5}) {
          const Complex z{zr, zi}, w{wr, wi};
          herm = herm &&
                 std::abs(kernel_Y(w, z) - std::conj(kernel_Y(z, w))) == 0.0;
          positive = positive && kernel_Y(z, z).real() > 0.0 &&
                     std::abs(kernel_Y(z, z).imag()) <= 1e-18;
        }
      }
    }
  }
  t.row("kernel hermitian symmetry", herm);
  t.row("kernel_Y(z,z) positive", positive);

  bool monomial_delta = true;
  for (int s = 2; s <= 6; ++s) {
    for (int tt = 2; tt <= 6; ++tt) {
      const Complex c = covariance_Z(AnalyticFunction::monomial(s),
                                     AnalyticFunction::monomial(tt))
                            .value;
      monomial_delta =
          monomial_delta && std::abs(c - (s == tt ? 1.0 : 0.0)) == 0.0;
    }
  }
  t.row("covariance_Z monomial delta", monomial_delta);

  const AnalyticFunction z2 = AnalyticFunction::monomial(2);
  const AnalyticFunction z3 = AnalyticFunction::monomial(3);
  const AnalyticFunction ex = AnalyticFunction::exponential();
  t.row("covariance_Z(z^2,z^3) = 0",
        std::abs(covariance_Z(z2, z3).value) == 0.0);

  // Independent oracle: direct partial sums of sum_{r>=2} 1/(r!)^2.
  double exp_oracle = 0.0;
  {
    double rfact = 1.0;
    for (int r = 1; r <= 40; ++r) {
      rfact *= r;
      if (r >= 2) exp_oracle += 1.0 / (rfact * rfact);
    }
  }
  const Complex exp_series = covariance_Z(ex, ex).value;
  t.row("covariance_Z(exp,exp) matches partial-sum oracle",
        std::abs(exp_series - exp_oracle) <= 1e-14, exp_series.real());

  const ContourSpec contour;
  for (const auto& [f, g, label] :
       {std::tuple{z2, z2, std::string("z^2,z^2")},
        std::tuple{z2, z3, std::string("z^2,z^3")},
        std::tuple{ex, ex, std::string("exp,exp")}}) {
    const Complex series = covariance_Z(f, g).value;
    const Complex cont = covariance_Z_contour(f, g, contour);
    t.row("series vs contour covariance (" + label + ")",
          std::abs(series - cont) <= 1e-8, std::abs(series - cont));
  }

  {
    SubstreamRng rng(20260825, 0);
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::MatrixXd A = random_matrix_with_norm(6, 2.0, rng);
      for (int deg = 0; deg <= 10; ++deg) {
        const AnalyticFunction f = AnalyticFunction::monomial(deg);
        const Eigen::MatrixXcd s = eval_series(f, A, 2.25).value;
        const Eigen::MatrixXcd c = eval_contour(f, A, contour);
        worst = std::max(worst, (s - c).cwiseAbs().maxCoeff());
      }
    }
    t.row("eval_series vs eval_contour (monomials, 6x6)", worst <= 1e-10,
          worst);
  }

  {
    bool ok = true;
    for (double zr : {2.5, 3.0, 4.0}) {
      const RealKernels k = real_kernels(zr, zr);
      ok = ok && std::abs(k.im_im) <= 1e-16 && std::abs(k.re_im) <= 1e-16 &&
           std::abs(k.re_re - kernel_Y(zr, zr)) <= 1e-16;
    }
    t.row("real_kernels at real z = w collapse to kernel_Y", ok);
  }

  {
    SubstreamRng rng(7, 1);
    const Eigen::MatrixXd A = random_matrix_with_norm(40, 2.25, rng);
    bool ok = true;
    for (double theta : {0.0, 1.0, 2.5}) {
      const Complex z = 2.5 * Complex{std::cos(theta), std::sin(theta)};
      const Eigen::MatrixXcd R = resolvent(A, z);
      ok = ok && spectral_norm(R, 1e-8) <= 4.0;
    }
    t.row("guarded resolvent norm bound K = 4", ok);
  }

  std::cout << (t.failures == 0 ? "all checks passed\n"
                                : "checks failed\n");
  return t.failures == 0 ? kExitPass : kExitCheckFailure;
}

int cmd_oracle(int n_max) {
  if (n_max > 8) {
    std::cerr << "oracle: n-max > 8 would enumerate more than 2^16 sign "
                 "patterns; refusing\n";
    return kExitConfig;
  }
  CheckTable t;
  {
    SubstreamRng rng(1234, 0);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
      const int n = 2 + static_cast<int>(rng.next() % 3);  // 2..4
      if (n > n_max) continue;
      const Eigen::MatrixXd B = random_matrix(n, rng);
      const double lhs = trace_identity_enumerate(B);
      const double rhs = (B * B.transpose()).trace() / n;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    t.row("trace identity E|u^T B v|^2/n = tr(BB^T)/n (50 random B)",
          worst <= 1e-14, worst);
  }
  {
    std::vector<int> grid;
    for (int n : {2, 4, 8}) {
      if (n <= n_max) grid.push_back(n);
    }
    const auto rows = qf_diagnostic(grid, Distribution::three_point, 0, 0);
    bool ok = true;
    for (const QfDiagnosticRow& r : rows) {
      const double closed = (3.0 * r.n - 2.0) / (r.n * r.n * r.n);
      ok = ok && r.exact && r.value == closed;
      std::cout << "  qf-diagnostic three-point n=" << r.n << " -> "
                << r.value << "\n";
    }
    t.row("qf diagnostic matches (3n-2)/n^3", ok);
  }
  std::cout << "  qf-diagnostic rademacher: trivially 0 (x^T x = n "
               "identically)\n";
  std::cout << (t.failures == 0 ? "all oracles passed\n" : "oracles failed\n");
  return t.failures == 0 ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for entry fluctuations of analytic "
               "functions of non-Hermitian random matrices"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", format = "both";
  int workers = 1;
  long seed_override = 0;
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "config file path")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--format", format, "json|csv|both")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  run->add_option("--workers", workers, "worker thread count");
  auto* seed_opt =
      run->add_option("--seed", seed_override, "override the config seed");

  auto* verify =
      app.add_subcommand("verify-theory", "deterministic identity suite");

  int n_max = 4;
  auto* oracle = app.add_subcommand("oracle", "exact enumeration oracles");
  oracle->add_option("--n-max", n_max, "largest enumerated size (<= 8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) {
      return cmd_run(config_path, out_dir, format, resolve_workers(workers),
                     seed_override, seed_opt->count() > 0);
    }
    if (verify->parsed()) return cmd_verify_theory();
    if (oracle->parsed()) return cmd_oracle(n_max);
  } catch (const ConfigError& e) {
    std::cerr << "config error (" << e.field << "): " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
