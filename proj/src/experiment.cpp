// SPDX-License-Identifier: Apache-2.0

#include "gossip_loc/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gossip_loc/csv.hpp"
#include "gossip_loc/error.hpp"
#include "gossip_loc/gossip.hpp"
#include "gossip_loc/numerics.hpp"
#include "gossip_loc/rng.hpp"

#ifndef GOSSIP_LOC_VERSION
#define GOSSIP_LOC_VERSION "0.0.0"
#endif

namespace gossip_loc {

namespace fs = std::filesystem;

namespace {

Graph make_graph(const ExperimentConfig& c, Seed graph_seed) {
  switch (c.graph) {
    case GraphSource::Complete: return generate(GraphKind::Complete, c.n);
    case GraphSource::Ring: return generate(GraphKind::Ring, c.n);
    case GraphSource::RandomGnp:
      return generate(GraphKind::RandomGnp, c.n, GenerateParams{c.p, graph_seed});
    case GraphSource::File: {
      std::ifstream is(c.graph_file);
      if (!is) throw Error(Errc::IoError, "cannot read graph file " + c.graph_file);
      return read_graph(is);
    }
  }
  throw Error(Errc::ValidationError, "unknown graph source", "graph");
}

fs::path prepare_output_dir(const ExperimentConfig& c) {
  const fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(Errc::IoError, "cannot create output directory " + dir.string());
  }
  return dir;
}

std::uint64_t stride_for(const ExperimentConfig& c) {
  return c.stride ? c.stride : default_stride(c.horizon);
}

void write_summary_csv(std::ostream& os, const MonteCarloSummary& mc,
                       const ExpectedTrajectory& expected, const VectorXd& oracle) {
  os << "k,node,mc_mean,mc_stderr,expected,oracle\n" << std::setprecision(17);
  for (std::size_t i = 0; i < mc.steps.size(); ++i) {
    const VectorXd se = mc.stderr_at(i);
    for (Eigen::Index v = 0; v < oracle.size(); ++v) {
      os << mc.steps[i] << ',' << v << ',' << mc.mean[i](v) << ',' << se(v) << ','
         << expected.means[i](v) << ',' << oracle(v) << '\n';
    }
  }
}

nlohmann::json seeds_json(const DerivedSeeds& s) {
  return {{"graph", s.graph}, {"truth", s.truth}, {"noise", s.noise}, {"edges", s.edges}};
}

}  // namespace

std::string library_version() { return GOSSIP_LOC_VERSION; }

DerivedSeeds derive_seeds(Seed base) {
  return DerivedSeeds{stream_seed(base, Stream::Graph), stream_seed(base, Stream::Truth),
                      stream_seed(base, Stream::Noise), trial_seed(base, 0)};
}

Scenario build_scenario(const ExperimentConfig& c) {
  validate_config(c);
  const DerivedSeeds seeds = derive_seeds(c.seed);
  Graph g = make_graph(c, seeds.graph);
  g.require_connected();

  TruthParams tp;
  tp.sigma = c.truth_sigma;
  tp.values = c.truth_values;
  tp.seed = seeds.truth;
  const VectorXd truth = generate_truth(c.truth, g.n_nodes(), tp);
  MeasurementSet ms = generate_measurements(g, truth, c.noise, seeds.noise);

  VectorXd x0 = VectorXd::Zero(g.n_nodes());
  if (c.x0) {
    if (static_cast<Eigen::Index>(c.x0->size()) != g.n_nodes()) {
      throw Error(Errc::ValidationError, "length must equal the node count", "x0");
    }
    x0 = Eigen::Map<const VectorXd>(c.x0->data(), g.n_nodes());
  }

  Scenario s{std::move(g), std::move(ms), x0, VectorXd(), seeds, {}};
  s.oracle = least_squares_estimate(s.graph, s.measurements.b);
  if (!is_zero_mean(x0)) {
    s.warnings.push_back(
        "initial state is not zero-mean; the raw state keeps its mean and the "
        "time-averages converge to x* shifted by mean(x0)");
  }
  const double rho = contraction_factor(s.graph, c.gamma);
  if (rho > 0.999) {
    s.warnings.push_back("contraction factor " + std::to_string(rho) +
                         " is close to 1; convergence will be slow");
  }
  return s;
}

RunManifest run_experiment(const ExperimentConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Scenario sc = build_scenario(c);
  const fs::path dir = prepare_output_dir(c);
  const std::uint64_t stride = stride_for(c);

  RunManifest manifest;
  manifest.config = c;
  manifest.seeds = sc.seeds;
  manifest.version = library_version();
  manifest.warnings = sc.warnings;
  manifest.summary.contraction_factor = contraction_factor(sc.graph, c.gamma);

  auto emit = [&](const std::string& name, const std::function<void(std::ostream&)>& writer) {
    write_file_atomic(dir / name, writer);
    manifest.artifacts.push_back(name);
  };

  emit("graph.txt", [&](std::ostream& os) { write_graph(os, sc.graph); });
  emit("measurements.csv",
       [&](std::ostream& os) { write_measurements_csv(os, sc.graph, sc.measurements); });
  emit("oracle.csv", [&](std::ostream& os) { write_vector_csv(os, sc.oracle); });

  ErgodicAccumulator ergodic(sc.graph.n_nodes(), c.subsequence);
  ergodic.add(0, sc.x0);
  RunOptions opts;
  opts.stride = stride;
  opts.x0 = sc.x0;
  const Trajectory<double> traj =
      run(sc.graph, sc.measurements.b, c.gamma, c.horizon, sc.seeds.edges, opts,
          [&](const GossipState<double>& s, EdgeIndex) { ergodic.add(s.k, s.x); });
  const ExpectedTrajectory expected =
      expected_trajectory(sc.graph, c.gamma, sc.measurements.b, sc.x0, c.horizon, stride);

  emit("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj); });
  emit("convergence.csv", [&](std::ostream& os) {
    os << "k,rel_l2_raw,rel_l2_tilde,rel_l2_expected\n" << std::setprecision(17);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const auto& s = traj.snapshots[i];
      os << s.k << ',' << error_metrics(s.x, sc.oracle).rel_l2 << ','
         << error_metrics(s.xtilde, sc.oracle).rel_l2 << ','
         << error_metrics(expected.means[i], sc.oracle).rel_l2 << '\n';
    }
  });

  const auto& last = traj.snapshots.back();
  manifest.summary.rel_l2_raw = error_metrics(last.x, sc.oracle).rel_l2;
  manifest.summary.rel_l2_tilde = error_metrics(last.xtilde, sc.oracle).rel_l2;
  manifest.summary.rel_l2_expected = error_metrics(expected.means.back(), sc.oracle).rel_l2;
  if (ergodic.count() > 0) {
    manifest.summary.rel_l2_ergodic_mean = error_metrics(ergodic.mean(), sc.oracle).rel_l2;
  } else {
    manifest.warnings.push_back("subsequence selected no steps within the horizon");
  }

  if (c.trials > 1) {
    MonteCarloOptions mo;
    mo.stride = stride;
    mo.threads = c.threads;
    mo.x0 = sc.x0;
    const MonteCarloSummary mc =
        monte_carlo(sc.graph, sc.measurements.b, c.gamma, c.horizon, c.trials, c.seed, mo);
    emit("montecarlo.csv",
         [&](std::ostream& os) { write_summary_csv(os, mc, expected, sc.oracle); });
  }

  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest.artifacts.push_back("manifest.json");
  write_file_atomic(dir / "manifest.json",
                    [&](std::ostream& os) { os << manifest_json(manifest) << '\n'; });
  return manifest;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(serialize_config(m.config));
  j["derived_seeds"] = seeds_json(m.seeds);
  j["artifacts"] = m.artifacts;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  j["version"] = m.version;
  j["warnings"] = m.warnings;
  j["summary"] = {{"rel_l2_raw", m.summary.rel_l2_raw},
                  {"rel_l2_tilde", m.summary.rel_l2_tilde},
                  {"rel_l2_expected", m.summary.rel_l2_expected},
                  {"rel_l2_ergodic_mean", m.summary.rel_l2_ergodic_mean},
                  {"contraction_factor", m.summary.contraction_factor}};
  return j.dump(2);
}

ExperimentConfig config_from_manifest(const std::string& manifest_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(manifest_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  if (!j.contains("config")) throw Error(Errc::ParseError, "manifest has no config");
  return parse_config(j["config"].dump());
}

ErrorMetrics run_expected(const ExperimentConfig& c) {
  const Scenario sc = build_scenario(c);
  const fs::path dir = prepare_output_dir(c);
  const ExpectedTrajectory et =
      expected_trajectory(sc.graph, c.gamma, sc.measurements.b, sc.x0, c.horizon, stride_for(c));
  write_file_atomic(dir / "expected.csv", [&](std::ostream& os) {
    os << "k,node,expected,oracle\n" << std::setprecision(17);
    for (std::size_t i = 0; i < et.steps.size(); ++i) {
      for (Eigen::Index v = 0; v < sc.oracle.size(); ++v) {
        os << et.steps[i] << ',' << v << ',' << et.means[i](v) << ',' << sc.oracle(v) << '\n';
      }
    }
  });
  return error_metrics(et.means.back(), sc.oracle);
}

ForwardBackwardComparison run_backward(const ExperimentConfig& c) {
  const Scenario sc = build_scenario(c);
  const fs::path dir = prepare_output_dir(c);
  const ForwardBackwardComparison cmp =
      compare_forward_backward(sc.graph, sc.measurements.b, c.gamma, sc.x0, c.horizon,
                               std::max<std::uint64_t>(2, c.trials), c.seed, c.threads);
  write_file_atomic(dir / "backward.csv", [&](std::ostream& os) {
    os << "node,forward_mean,forward_stderr,backward_mean,backward_stderr\n"
       << std::setprecision(17);
    for (Eigen::Index v = 0; v < cmp.forward_mean.size(); ++v) {
      os << v << ',' << cmp.forward_mean(v) << ',' << cmp.forward_stderr(v) << ','
         << cmp.backward_mean(v) << ',' << cmp.backward_stderr(v) << '\n';
    }
  });
  return cmp;
}

MonteCarloSummary run_montecarlo(const ExperimentConfig& c) {
  if (c.trials < 2) {
    throw Error(Errc::ValidationError, "montecarlo needs trials >= 2", "trials");
  }
  const Scenario sc = build_scenario(c);
  const fs::path dir = prepare_output_dir(c);
  const std::uint64_t stride = stride_for(c);
  MonteCarloOptions mo;
  mo.stride = stride;
  mo.threads = c.threads;
  mo.x0 = sc.x0;
  const MonteCarloSummary mc =
      monte_carlo(sc.graph, sc.measurements.b, c.gamma, c.horizon, c.trials, c.seed, mo);
  const ExpectedTrajectory et =
      expected_trajectory(sc.graph, c.gamma, sc.measurements.b, sc.x0, c.horizon, stride);
  write_file_atomic(dir / "montecarlo.csv",
                    [&](std::ostream& os) { write_summary_csv(os, mc, et, sc.oracle); });
  return mc;
}

}  // namespace gossip_loc
