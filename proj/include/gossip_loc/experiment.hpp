// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "gossip_loc/analysis.hpp"
#include "gossip_loc/config.hpp"
#include "gossip_loc/graph.hpp"
#include "gossip_loc/measurement.hpp"
#include "gossip_loc/types.hpp"

namespace gossip_loc {

std::string library_version();

struct DerivedSeeds {
  Seed graph = 0;
  Seed truth = 0;
  Seed noise = 0;
  Seed edges = 0;  // seed of the single forward run (trial 0)
};

DerivedSeeds derive_seeds(Seed base);

/// Everything fixed by the config before any gossip step is taken.
struct Scenario {
  Graph graph;
  MeasurementSet measurements;
  VectorXd x0;
  VectorXd oracle;
  DerivedSeeds seeds;
  std::vector<std::string> warnings;
};

Scenario build_scenario(const ExperimentConfig& c);

struct RunSummary {
  double rel_l2_raw = 0.0;
  double rel_l2_tilde = 0.0;
  double rel_l2_expected = 0.0;
  double rel_l2_ergodic_mean = 0.0;
  double contraction_factor = 0.0;
};

struct RunManifest {
  ExperimentConfig config;
  DerivedSeeds seeds;
  std::vector<std::string> artifacts;
  double wall_clock_seconds = 0.0;
  std::string version;
  std::vector<std::string> warnings;
  RunSummary summary;
};

/// Simulates one forward run and writes, into c.output_dir: graph.txt,
/// measurements.csv, oracle.csv, trajectory.csv, convergence.csv,
/// montecarlo.csv (trials > 1) and manifest.json (last).
RunManifest run_experiment(const ExperimentConfig& c);

std::string manifest_json(const RunManifest& m);

/// Config embedded in a manifest.json document.
ExperimentConfig config_from_manifest(const std::string& manifest_text);

/// Writes expected.csv (k,node,expected,oracle); returns the final metrics.
ErrorMetrics run_expected(const ExperimentConfig& c);

/// Writes backward.csv comparing forward and backward endpoints over
/// max(2, trials) trials.
ForwardBackwardComparison run_backward(const ExperimentConfig& c);

/// Writes montecarlo.csv (k,node,mc_mean,mc_stderr,expected,oracle).
MonteCarloSummary run_montecarlo(const ExperimentConfig& c);

}  // namespace gossip_loc
