// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gossip_loc/analysis.hpp"
#include "gossip_loc/measurement.hpp"
#include "gossip_loc/types.hpp"

namespace gossip_loc {

enum class GraphSource { Complete, Ring, RandomGnp, File };

/// Experiment description. Defaults reproduce the reference scenario: complete
/// graph on 20 nodes, gamma = 0.1, zero initial conditions, ramp truth,
/// Gaussian noise with sigma = 1.
struct ExperimentConfig {
  GraphSource graph = GraphSource::Complete;
  std::int64_t n = 20;
  double p = 0.5;
  std::string graph_file;

  TruthKind truth = TruthKind::Ramp;
  double truth_sigma = 1.0;
  std::vector<double> truth_values;

  NoiseModel noise;

  double gamma = 0.1;
  std::optional<std::vector<double>> x0;  // nullopt = zero

  std::uint64_t horizon = 200000;
  std::uint64_t trials = 1;
  std::uint64_t stride = 0;  // 0 = max(1, horizon/1000)
  Subsequence subsequence = Subsequence::all();

  Seed seed = 1;
  std::string output_dir;
  unsigned threads = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// $GOSSIP_LOC_OUT when set, otherwise "gossip_out".
std::string default_output_dir();

/// Parses a flat JSON object; missing keys take the defaults above. Throws
/// ParseError (message carries the line) or ValidationError (field() names
/// the key).
ExperimentConfig parse_config(std::string_view text);

/// Re-checks every field. Called by parse_config and after CLI overrides.
void validate_config(const ExperimentConfig& c);

/// Pretty-printed JSON; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace gossip_loc
