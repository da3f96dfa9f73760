// SPDX-License-Identifier: Apache-2.0

#include "gossip_loc/measurement.hpp"

#include <cmath>
#include <iomanip>
#include <random>

#include "gossip_loc/error.hpp"
#include "gossip_loc/rng.hpp"

namespace gossip_loc {

VectorXd generate_truth(TruthKind kind, Eigen::Index n, const TruthParams& params) {
  if (n < 2) throw Error(Errc::IndexOutOfRange, "truth needs n >= 2");
  switch (kind) {
    case TruthKind::Ramp:
      return VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
    case TruthKind::Explicit: {
      if (static_cast<Eigen::Index>(params.values.size()) != n) {
        throw Error(Errc::DimensionMismatch, "explicit truth has " +
                                                 std::to_string(params.values.size()) +
                                                 " entries, expected " + std::to_string(n));
      }
      return Eigen::Map<const VectorXd>(params.values.data(), n);
    }
    case TruthKind::ZeroMeanGaussian: {
      Rng rng(params.seed);
      std::normal_distribution<double> normal(0.0, params.sigma);
      VectorXd x(n);
      for (Eigen::Index i = 0; i < n; ++i) x(i) = normal(rng);
      x.array() -= x.mean();
      return x;
    }
  }
  throw Error(Errc::ValidationError, "unknown truth kind");
}

MeasurementSet generate_measurements(const Graph& g, const VectorXd& truth,
                                     const NoiseModel& noise, Seed seed) {
  if (truth.size() != g.n_nodes()) {
    throw Error(Errc::DimensionMismatch, "truth length differs from node count");
  }
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw Error(Errc::ValidationError, "noise sigma must be finite and >= 0", "sigma");
  }
  MeasurementSet ms{VectorXd(g.n_edges()), truth, noise, seed};
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, noise.sigma);
  const double half_width = std::sqrt(3.0) * noise.sigma;
  std::uniform_real_distribution<double> uniform(-half_width, half_width);

  EdgeIndex row = 0;
  for (const Edge& e : g.edges()) {
    double eta = 0.0;
    if (noise.kind == NoiseKind::Gaussian) eta = normal(rng);
    if (noise.kind == NoiseKind::Uniform) eta = uniform(rng);
    ms.b(row++) = truth(e.u) - truth(e.v) + eta;
  }
  return ms;
}

void write_measurements_csv(std::ostream& os, const Graph& g, const MeasurementSet& ms) {
  os << "# seed=" << ms.seed << " sigma=" << std::setprecision(17) << ms.noise.sigma << '\n';
  os << "edge_index,u,v,b\n";
  for (EdgeIndex e = 0; e < g.n_edges(); ++e) {
    const Edge& edge = g.edge(e);
    os << e << ',' << edge.u << ',' << edge.v << ',' << ms.b(e) << '\n';
  }
}

}  // namespace gossip_loc
