// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <vector>

#include "gossip_loc/graph.hpp"
#include "gossip_loc/types.hpp"

namespace gossip_loc {

enum class NoiseKind { None, Gaussian, Uniform };

/// Zero-mean i.i.d. edge noise with standard deviation `sigma`. Uniform noise
/// has half-width sqrt(3)*sigma so both kinds share the covariance sigma^2 I.
struct NoiseModel {
  NoiseKind kind = NoiseKind::Gaussian;
  double sigma = 1.0;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

struct MeasurementSet {
  VectorXd b;
  VectorXd truth;
  NoiseModel noise;
  Seed seed = 0;
};

enum class TruthKind { ZeroMeanGaussian, Ramp, Explicit };

struct TruthParams {
  double sigma = 1.0;                 // ZeroMeanGaussian
  std::vector<double> values;         // Explicit
  Seed seed = 0;                      // ZeroMeanGaussian
};

/// Ramp is (0, 1, ..., n-1); ZeroMeanGaussian draws N(0, sigma^2) entries and
/// re-centres them; Explicit copies `values` (its length must be n).
VectorXd generate_truth(TruthKind kind, Eigen::Index n, const TruthParams& params = {});

/// b_e = truth_u - truth_v + eta_e for edge e = (u, v).
MeasurementSet generate_measurements(const Graph& g, const VectorXd& truth,
                                     const NoiseModel& noise, Seed seed);

/// "<edge_index>,<u>,<v>,<b_value>" rows after a '#' comment with seed and sigma.
void write_measurements_csv(std::ostream& os, const Graph& g, const MeasurementSet& ms);

}  // namespace gossip_loc
