// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gossip_loc/cli.hpp"
#include "gossip_loc/csv.hpp"
#include "gossip_loc/experiment.hpp"

using namespace gossip_loc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gossip_loc_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig c = parse_config(R"({"graph": "ring", "n": 6, "horizon": 3000,
                                        "trials": 40, "seed": 11})");
  c.output_dir = out.string();
  return c;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gossip-loc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("run_experiment writes every artifact") {
  const fs::path dir = scratch_dir("artifacts");
  const RunManifest m = run_experiment(small_config(dir));
  for (const char* name : {"graph.txt", "measurements.csv", "oracle.csv", "trajectory.csv",
                           "convergence.csv", "montecarlo.csv", "manifest.json"}) {
    CHECK(fs::exists(dir / name));
    CHECK(std::find(m.artifacts.begin(), m.artifacts.end(), name) != m.artifacts.end());
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().extension() != ".tmp");
  }
  // 3000 steps at stride 3 -> 1001 snapshots.
  CHECK(count_lines(slurp(dir / "convergence.csv")) == 1 + 1001);
  CHECK(count_lines(slurp(dir / "trajectory.csv")) == 1 + 1001 * 6);
  CHECK(count_lines(slurp(dir / "montecarlo.csv")) == 1 + 1001 * 6);
  CHECK(slurp(dir / "montecarlo.csv").rfind("k,node,mc_mean,mc_stderr,expected,oracle\n", 0) == 0);
  CHECK(m.summary.contraction_factor < 1.0);
  CHECK(m.version == library_version());
}

TEST_CASE("horizon 0 yields a single snapshot") {
  const fs::path dir = scratch_dir("k0");
  ExperimentConfig c = small_config(dir);
  c.horizon = 0;
  c.trials = 1;
  run_experiment(c);
  CHECK(count_lines(slurp(dir / "convergence.csv")) == 2);
  CHECK(count_lines(slurp(dir / "trajectory.csv")) == 1 + 6);
  CHECK_FALSE(fs::exists(dir / "montecarlo.csv"));
}

TEST_CASE("reruns are byte-identical and manifests reproduce the run") {
  const fs::path a = scratch_dir("det_a");
  const fs::path b = scratch_dir("det_b");
  const fs::path c = scratch_dir("det_c");
  run_experiment(small_config(a));
  ExperimentConfig second = small_config(b);
  second.threads = 3;
  run_experiment(second);

  ExperimentConfig from_manifest = config_from_manifest(slurp(a / "manifest.json"));
  CHECK(from_manifest == small_config(a));
  from_manifest.output_dir = c.string();
  run_experiment(from_manifest);

  for (const char* name : {"graph.txt", "measurements.csv", "oracle.csv", "trajectory.csv",
                           "convergence.csv", "montecarlo.csv"}) {
    CHECK(slurp(a / name) == slurp(b / name));
    CHECK(slurp(a / name) == slurp(c / name));
  }
}

TEST_CASE("changing the horizon does not perturb the measurements") {
  const fs::path a = scratch_dir("hz_a");
  const fs::path b = scratch_dir("hz_b");
  ExperimentConfig ca = small_config(a);
  ExperimentConfig cb = small_config(b);
  cb.horizon = 17;
  run_experiment(ca);
  run_experiment(cb);
  CHECK(slurp(a / "measurements.csv") == slurp(b / "measurements.csv"));
}

TEST_CASE("atomic writes leave nothing behind on failure") {
  const fs::path dir = scratch_dir("atomic");
  fs::create_directories(dir);
  CHECK_THROWS_AS(write_file_atomic(dir / "x.csv",
                                    [](std::ostream& os) {
                                      os << "partial";
                                      throw std::runtime_error("boom");
                                    }),
                  std::runtime_error);
  CHECK(fs::is_empty(dir));
}

TEST_CASE("experiment subcommand helpers") {
  const fs::path dir = scratch_dir("helpers");
  ExperimentConfig c = small_config(dir);
  c.horizon = 2000;
  const ErrorMetrics m = run_expected(c);
  CHECK(m.rel_l2 < 1e-6);
  CHECK(fs::exists(dir / "expected.csv"));

  c.horizon = 20;
  c.trials = 500;
  const auto cmp = run_backward(c);
  CHECK(cmp.trials == 500);
  CHECK(fs::exists(dir / "backward.csv"));

  const auto mc = run_montecarlo(c);
  CHECK(mc.trials == 500);
  c.trials = 1;
  CHECK_THROWS_AS(run_montecarlo(c), Error);

  c.x0 = std::vector<double>{1, 1, 1, 1, 1, 1};
  CHECK_THROWS_AS(run_backward(c), Error);
  const Scenario sc = build_scenario(c);
  CHECK_FALSE(sc.warnings.empty());
}

TEST_CASE("cli: oracle on the two-node noiseless scenario") {
  const fs::path dir = scratch_dir("cli_oracle");
  const fs::path cfg = write_config(dir, "two.json", R"({"graph": "ring", "n": 2,
      "truth": "explicit", "truth_values": [1, 3], "noise": "none"})");
  const CliResult r = cli({"oracle", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.code == 0);
  CHECK(r.out == "node,x_star\n0,-1\n1,1\n");
}

TEST_CASE("cli: usage and runtime errors") {
  CHECK(cli({"bogus"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"simulate", "--horizon", "abc"}).code == 2);
  const CliResult help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
  const CliResult version = cli({"--version"});
  CHECK(version.code == 0);
  CHECK(version.out.find(library_version()) != std::string::npos);

  const fs::path dir = scratch_dir("cli_errors");
  CHECK(cli({"simulate", (dir / "missing.json").string()}).code == 1);
  const fs::path bad = write_config(dir, "bad.json", R"({"gamma": 1.5})");
  const CliResult r = cli({"simulate", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("gamma") != std::string::npos);
}

TEST_CASE("cli: subcommands run end to end") {
  const fs::path dir = scratch_dir("cli_run");
  const std::string out = (dir / "out").string();
  const CliResult sim = cli({"simulate", "--horizon", "0", "--out", out});
  CHECK(sim.code == 0);
  CHECK(count_lines(slurp(dir / "out" / "convergence.csv")) == 2);

  const fs::path cfg = write_config(dir, "ring.json", R"({"graph": "ring", "n": 5,
      "gamma": 0.5, "horizon": 30, "trials": 200})");
  CHECK(cli({"expected", cfg.string(), "--out", out}).code == 0);
  CHECK(cli({"backward", cfg.string(), "--out", out, "--threads", "2"}).code == 0);
  CHECK(cli({"montecarlo", cfg.string(), "--out", out, "--seed", "9"}).code == 0);
  CHECK(fs::exists(dir / "out" / "expected.csv"));
  CHECK(fs::exists(dir / "out" / "backward.csv"));
  CHECK(fs::exists(dir / "out" / "montecarlo.csv"));
}
