// SPDX-License-Identifier: Apache-2.0

#include "gossip_loc/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <optional>
#include <string>

#include "gossip_loc/config.hpp"
#include "gossip_loc/error.hpp"
#include "gossip_loc/experiment.hpp"

namespace gossip_loc {

namespace {

struct Overrides {
  std::optional<Seed> seed;
  std::optional<std::string> out;
  std::optional<std::uint64_t> horizon;
  std::optional<unsigned> threads;
};

ExperimentConfig resolve_config(const std::string& path, const Overrides& o) {
  ExperimentConfig c;
  if (path.empty()) {
    c = parse_config("{}");
  } else {
    c = load_config_file(path);
  }
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.horizon) c.horizon = *o.horizon;
  if (o.threads) c.threads = *o.threads;
  validate_config(c);
  return c;
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized gossip simulator for relative localization"};
  app.name("gossip-loc");
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--seed", o.seed, "Override the base seed");
  app.add_option("--out", o.out, "Override the output directory");
  app.add_option("--horizon", o.horizon, "Override the number of gossip steps");
  app.add_option("--threads", o.threads, "Worker threads for Monte Carlo (0 = auto)");

  std::string config_path;
  auto add_cmd = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("config", config_path, "Experiment config (JSON); defaults when omitted");
    return sub;
  };
  CLI::App* simulate = add_cmd("simulate", "Run one trajectory and write all artifacts");
  CLI::App* oracle = add_cmd("oracle", "Print the least-squares solution x*");
  CLI::App* expected = add_cmd("expected", "Write the expected trajectory E[x(k)]");
  CLI::App* backward = add_cmd("backward", "Compare forward and backward endpoints");
  CLI::App* montecarlo = add_cmd("montecarlo", "Monte Carlo mean and stderr per snapshot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  try {
    const ExperimentConfig c = resolve_config(config_path, o);
    out << std::setprecision(17);
    if (simulate->parsed()) {
      const RunManifest m = run_experiment(c);
      print_warnings(err, m.warnings);
      out << "artifacts written to " << c.output_dir << '\n'
          << "rel_l2 raw        " << m.summary.rel_l2_raw << '\n'
          << "rel_l2 tilde      " << m.summary.rel_l2_tilde << '\n'
          << "rel_l2 expected   " << m.summary.rel_l2_expected << '\n'
          << "rel_l2 ergodic    " << m.summary.rel_l2_ergodic_mean << '\n'
          << "contraction rho   " << m.summary.contraction_factor << '\n';
    } else if (oracle->parsed()) {
      const Scenario sc = build_scenario(c);
      print_warnings(err, sc.warnings);
      out << "node,x_star\n";
      for (Eigen::Index v = 0; v < sc.oracle.size(); ++v) out << v << ',' << sc.oracle(v) << '\n';
    } else if (expected->parsed()) {
      const ErrorMetrics m = run_expected(c);
      out << "expected.csv written to " << c.output_dir << '\n'
          << "final rel_l2 " << m.rel_l2 << " linf " << m.linf << '\n';
    } else if (backward->parsed()) {
      const ForwardBackwardComparison cmp = run_backward(c);
      out << "node,forward_mean,backward_mean,combined_stderr\n";
      for (Eigen::Index v = 0; v < cmp.forward_mean.size(); ++v) {
        out << v << ',' << cmp.forward_mean(v) << ',' << cmp.backward_mean(v) << ','
            << std::hypot(cmp.forward_stderr(v), cmp.backward_stderr(v)) << '\n';
      }
      out << "trials " << cmp.trials << " max_z " << cmp.max_z << '\n';
    } else if (montecarlo->parsed()) {
      const MonteCarloSummary mc = run_montecarlo(c);
      out << "montecarlo.csv written to " << c.output_dir << '\n'
          << "trials " << mc.trials << " snapshots " << mc.steps.size()
          << " final covariance trace " << mc.covariance_trace.back() << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (!e.field().empty()) err << " (field: " << e.field() << ')';
    err << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gossip_loc
