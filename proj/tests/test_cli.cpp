// Copyright (c) 2026 The fluctlab authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end tests of the installed command-line interface.  The binary path
// is injected by the build via FLUCTLAB_CLI_PATH.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return FLUCTLAB_CLI_PATH; }

int run_command(const std::string& args) {
  const std::string cmd =
      std::string(cli_path()) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("fluctlab_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const std::string kLinearConfig = R"(
[ensemble]
distribution = gaussian
seed = 9

[experiment]
n-grid = 16
trials = 8

[statistic]
kind = f-entry
f = poly:0,1
i = 1
j = 2
)";

}  // namespace

TEST_CASE("verify-theory and oracle suites pass") {
  CHECK(run_command("verify-theory") == 0);
  CHECK(run_command("oracle --n-max 8") == 0);
}

TEST_CASE("oracle refuses n-max > 8 with a config-error exit") {
  CHECK(run_command("oracle --n-max 9") == 64);
}

TEST_CASE("malformed config exits 64 naming the field") {
  const fs::path dir = temp_dir("badcfg");
  write_file(dir / "bad.ini",
             "[ensemble]\ndistribution = gaussian\nseed = 1\n"
             "[experiment]\nn-grid = 16\n[statistic]\nkind = norm\n");
  const std::string cmd = std::string(cli_path()) + " run --config " +
                          (dir / "bad.ini").string() + " --out " +
                          dir.string() + " 2> " + (dir / "err.txt").string();
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 64);
  CHECK(read_file(dir / "err.txt").find("experiment.trials") !=
        std::string::npos);
}

TEST_CASE("missing config file exits 74") {
  CHECK(run_command("run --config /nonexistent.ini --out /tmp") == 74);
}

TEST_CASE("degenerate linear statistic produces a zero summary row") {
  const fs::path dir = temp_dir("linear");
  write_file(dir / "cfg.ini", kLinearConfig);
  const int code = run_command("run --config " + (dir / "cfg.ini").string() +
                               " --out " + dir.string() + " --format both");
  CHECK(code == 0);
  const std::string csv = read_file(dir / "summary.csv");
  CHECK(csv.find("n,statistic,mean,") == 0);
  CHECK(csv.find("16,f-entry[f=poly:0,1;i=1;j=2],0,0,0,0,0,") !=
        std::string::npos);
  CHECK(fs::exists(dir / "report.json"));
}

TEST_CASE("summary.csv is byte-identical across worker counts") {
  const fs::path dir = temp_dir("repro");
  write_file(dir / "cfg.ini", R"(
[ensemble]
distribution = uniform
seed = 123

[experiment]
n-grid = 24, 32
trials = 40

[statistic]
kind = Y-entry
z = 3
i = 1
j = 2
)");
  const fs::path out1 = dir / "w1";
  const fs::path out2 = dir / "w2";
  CHECK(run_command("run --config " + (dir / "cfg.ini").string() + " --out " +
                    out1.string() + " --format csv --workers 1") == 0);
  CHECK(run_command("run --config " + (dir / "cfg.ini").string() + " --out " +
                    out2.string() + " --format csv --workers 3") == 0);
  const std::string a = read_file(out1 / "summary.csv");
  const std::string b = read_file(out2 / "summary.csv");
  CHECK(a == b);
  CHECK(!a.empty());
}

TEST_CASE("FLUCTLAB_WORKERS override keeps results identical") {
  const fs::path dir = temp_dir("env");
  write_file(dir / "cfg.ini", kLinearConfig);
  const fs::path out = dir / "out";
  const std::string cmd = "FLUCTLAB_WORKERS=2 " + std::string(cli_path()) +
                          " run --config " + (dir / "cfg.ini").string() +
                          " --out " + out.string() +
                          " --format csv > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(out / "summary.csv"));
}

TEST_CASE("failing acceptance-style check exits 2") {
  const fs::path dir = temp_dir("check");
  write_file(dir / "cfg.ini", R"(
[ensemble]
distribution = gaussian
seed = 5

[experiment]
n-grid = 16
trials = 10

[statistic]
kind = trace-kernel
z = 3
w = 3

[check]
mean-tol = 1e-12
)");
  CHECK(run_command("run --config " + (dir / "cfg.ini").string() + " --out " +
                    (dir / "out").string()) == 2);
}
