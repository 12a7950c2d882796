#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stablepred/json_io.hpp"

using namespace stablepred;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("stable_predict_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(STABLE_PREDICT_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli certify-stability: feasible run exits 0 and writes a parsable report") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "class": {"kind": "thresholds", "domain_size": 3},
    "n": 3, "n_prime": 1, "gamma": 0.5, "alpha": 0.25, "beta": 0.05
  })");
  const int code = run_cli("certify-stability --config " +
                           (dir.path / "config.json").string() + " --out " +
                           (dir.path / "out").string());
  CHECK(code == 0);
  const auto report = json::parse(read_file(dir.path / "out" / "report.json"));
  CHECK(report["stability_ok"].get<bool>());
  CHECK(report.contains("preconditions"));
  CHECK(report["naive_oracle_max_abs_delta"].get<double>() <= 1e-9);
}

TEST_CASE("cli certify-stability: the bare-ERM fixture violates the bound and exits 1") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "class": {"kind": "thresholds", "domain_size": 2},
    "n": 2, "n_prime": 1, "gamma": 0.1, "learner": "erm_only"
  })");
  CHECK(run_cli("certify-stability --config " + (dir.path / "config.json").string()) == 1);
}

TEST_CASE("cli certify-stability: oversize grid exits 2") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "class": {"kind": "thresholds", "domain_size": 8},
    "n": 10, "n_prime": 2, "gamma": 0.5
  })");
  CHECK(run_cli("certify-stability --config " + (dir.path / "config.json").string()) == 2);
}

TEST_CASE("cli certify-privacy: desk instance exits 0 with both relations intact") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "class": {"kind": "thresholds", "domain_size": 3},
    "n": 3, "n_prime": 2, "eta": 1.0, "r": 2, "partition_size": 1,
    "delta_resolution": 0.001, "delta_max": 0.01
  })");
  const int code = run_cli("certify-privacy --config " +
                           (dir.path / "config.json").string() + " --out " +
                           (dir.path / "out").string());
  CHECK(code == 0);
  const auto report = json::parse(read_file(dir.path / "out" / "report.json"));
  CHECK(report["fixed_t_dominance"]["holds"].get<bool>());
  CHECK(report["swap_dominance"]["holds"].get<bool>());
  CHECK(report["naive_oracle_max_abs_delta"].get<double>() <= 1e-9);
}

TEST_CASE("cli predict: single-hypothesis class prints a degenerate probability") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "class": {"kind": "explicit", "vectors": [[1, 0]]},
    "learner": "stable", "n_prime": 1, "gamma": 1.0
  })");
  write_file(dir.path / "data.json", R"({"domain_size": 2, "pairs": [[0,1],[1,0]]})");
  const int code = run_cli("predict --config " + (dir.path / "config.json").string() +
                           " --dataset " + (dir.path / "data.json").string() +
                           " --point 0 --out " + (dir.path / "out").string());
  CHECK(code == 0);
  const auto report = json::parse(read_file(dir.path / "out" / "report.json"));
  const double p = report["probability"].get<double>();
  CHECK((p == 1.0 || p == 0.0));
  CHECK(report["label"].get<int>() == 1);
}

TEST_CASE("cli predict: exact probability matches the sampled frequency") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "class": {"kind": "thresholds", "domain_size": 3},
    "learner": "stable", "n_prime": 2, "gamma": 0.5
  })");
  write_file(dir.path / "data.json",
             R"({"domain_size": 3, "pairs": [[0,1],[1,0],[2,0],[1,1]]})");
  const int code = run_cli("predict --config " + (dir.path / "config.json").string() +
                           " --dataset " + (dir.path / "data.json").string() +
                           " --point 1 --out " + (dir.path / "outA").string());
  CHECK(code == 0);
  const auto exact = json::parse(read_file(dir.path / "outA" / "report.json"));
  const double p = exact["probability"].get<double>();

  int ones = 0;
  const int trials = 400;
  for (int seed = 0; seed < trials; ++seed) {
    const int rc = run_cli("predict --config " + (dir.path / "config.json").string() +
                           " --dataset " + (dir.path / "data.json").string() +
                           " --point 1 --mode sampled --seed " + std::to_string(seed) +
                           " --out " + (dir.path / "outB").string());
    REQUIRE(rc == 0);
    const auto sampled = json::parse(read_file(dir.path / "outB" / "report.json"));
    ones += sampled["label"].get<int>();
  }
  // 4-sigma binomial band around the exact probability
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(ones / static_cast<double>(trials) - p) <= 4.0 * sigma + 1e-9);
}

TEST_CASE("cli predict: missing dataset file exits 2") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "class": {"kind": "thresholds", "domain_size": 3},
    "learner": "stable", "n_prime": 1, "gamma": 0.5
  })");
  CHECK(run_cli("predict --config " + (dir.path / "config.json").string() +
                " --dataset " + (dir.path / "missing.json").string() + " --point 0") == 2);
}

TEST_CASE("cli: unknown config keys exit 2") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "class": {"kind": "thresholds", "domain_size": 3},
    "n": 3, "n_prime": 1, "gamma": 0.5, "surprise": true
  })");
  CHECK(run_cli("certify-stability --config " + (dir.path / "config.json").string()) == 2);
}

TEST_CASE("cli experiment: sweep emits the fixed CSV header deterministically") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "experiment": "sweep",
    "class": {"kind": "thresholds", "domain_size": 3},
    "n_values": [2, 4], "n_prime": 1, "gamma": 0.5, "trials": 10,
    "grid_cap": 2000, "seed": 9
  })");
  const auto run = [&](const std::string& out) {
    return run_cli("experiment --config " + (dir.path / "config.json").string() +
                   " --out " + (dir.path / out).string());
  };
  CHECK(run("out1") == 0);
  CHECK(run("out2") == 0);
  const auto csv = read_file(dir.path / "out1" / "sweep.csv");
  CHECK(csv.rfind("n,d,alpha,gamma,eps,excess_err,stability_gap,min_eps,delta,seed\n", 0) == 0);
  CHECK(csv == read_file(dir.path / "out2" / "sweep.csv"));
  CHECK(read_file(dir.path / "out1" / "summary.json") ==
        read_file(dir.path / "out2" / "summary.json"));
  const auto summary = json::parse(read_file(dir.path / "out1" / "summary.json"));
  CHECK(summary.contains("preconditions"));

  // the thread cap must not change any output byte
  const int rc = std::system((std::string("STABLE_PREDICT_THREADS=1 ") + STABLE_PREDICT_BIN +
                              " experiment --config " + (dir.path / "config.json").string() +
                              " --out " + (dir.path / "out3").string() + " > /dev/null 2>&1")
                                 .c_str());
  CHECK(WEXITSTATUS(rc) == 0);
  CHECK(csv == read_file(dir.path / "out3" / "sweep.csv"));
}

TEST_CASE("cli experiment: net-check writes failure rates") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "experiment": "net-check",
    "class": {"kind": "thresholds", "domain_size": 8},
    "alpha": 0.25, "n_prime_values": [2, 8], "trials": 300, "seed": 4
  })");
  CHECK(run_cli("experiment --config " + (dir.path / "config.json").string() + " --out " +
                (dir.path / "out").string()) == 0);
  const auto summary = json::parse(read_file(dir.path / "out" / "summary.json"));
  const auto rates = summary["failure_rates"];
  REQUIRE(rates.size() == 2);
  CHECK(rates[0][1].get<double>() > rates[1][1].get<double>());
  CHECK(read_file(dir.path / "out" / "net_check.csv").rfind("n_prime,failure_rate\n", 0) == 0);
}

TEST_CASE("cli experiment: lower-bound run writes the threshold report") {
  TempDir dir;
  write_file(dir.path / "config.json", R"({
    "experiment": "lower-bound",
    "d": 3, "alpha_num": 1, "alpha_den": 8, "gamma": 0.25,
    "n_prime": 1, "n_values": [4], "trials": 60, "seed": 11
  })");
  CHECK(run_cli("experiment --config " + (dir.path / "config.json").string() + " --out " +
                (dir.path / "out").string()) == 0);
  const auto summary = json::parse(read_file(dir.path / "out" / "summary.json"));
  const auto& run = summary["runs"][0];
  CHECK(run["n_star"].get<double>() == doctest::Approx(8.0));
  CHECK(run["below_threshold"].get<bool>());
  CHECK(run["chain_ok"].get<bool>());
}
