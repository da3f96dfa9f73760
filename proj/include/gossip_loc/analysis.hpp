// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gossip_loc/graph.hpp"
#include "gossip_loc/types.hpp"

namespace gossip_loc {

/// E[x(k)] at steps[i], from E[x(k+1)] = E[Q] E[x(k)] + E[y].
struct ExpectedTrajectory {
  std::vector<std::uint64_t> steps;
  std::vector<VectorXd> means;
};

/// Keeps k = 0, every multiple of `stride`, and k = horizon.
ExpectedTrajectory expected_trajectory(const Graph& g, double gamma, const VectorXd& b,
                                       const VectorXd& x0, std::uint64_t horizon,
                                       std::uint64_t stride = 1);

/// x(horizon) of a forward run with the given edge-selection seed.
VectorXd forward_endpoint(const Graph& g, const VectorXd& b, double gamma, const VectorXd& x0,
                          std::uint64_t horizon, Seed seed);

/// Backward process: the same sampled updates as forward_endpoint(seed), but
/// composed as P(0) P(1) ... P(K-1) x0 + sum_l P(0)...P(l-1) y(l). Evaluated by
/// replaying the stored edge sequence from last to first, O(K N).
/// Throws NonZeroMeanInit unless 1^T x0 = 0.
VectorXd backward_trajectory(const Graph& g, const VectorXd& b, double gamma,
                             const VectorXd& x0, std::uint64_t horizon, Seed seed);

/// Which sample positions (or step indices, for the streaming accumulator)
/// enter an ergodic mean. Indices may repeat; each occurrence counts.
class Subsequence {
 public:
  enum class Kind { All, Even, Indices };

  static Subsequence all() { return Subsequence(Kind::All, {}); }
  static Subsequence even() { return Subsequence(Kind::Even, {}); }
  static Subsequence indices(std::vector<std::uint64_t> idx);

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::uint64_t>& index_list() const noexcept { return indices_; }

  /// Number of times position k is selected.
  std::uint64_t multiplicity(std::uint64_t k) const;

  friend bool operator==(const Subsequence&, const Subsequence&) = default;

 private:
  Subsequence(Kind kind, std::vector<std::uint64_t> idx) : kind_(kind), indices_(std::move(idx)) {}

  Kind kind_;
  std::vector<std::uint64_t> indices_;  // sorted
};

VectorXd ergodic_mean(std::span<const VectorXd> samples, const Subsequence& sub);

/// Streaming form of ergodic_mean for long runs: feed (k, x(k)) in any order.
class ErgodicAccumulator {
 public:
  ErgodicAccumulator(Eigen::Index n, Subsequence sub);

  void add(std::uint64_t k, const VectorXd& x);
  std::uint64_t count() const noexcept { return count_; }
  VectorXd mean() const;

 private:
  Subsequence sub_;
  VectorXd sum_;
  VectorXd compensation_;
  std::uint64_t count_ = 0;
};

struct ErrorMetrics {
  double rel_l2 = 0.0;
  double linf = 0.0;
  double mean_shift = 0.0;
};

/// rel_l2 = ||e - o|| / max(||o||, 1e-14); mean_shift = |1^T (e - o)| / N.
ErrorMetrics error_metrics(const VectorXd& estimate, const VectorXd& oracle);

/// Welford/Chan running moments per coordinate.
struct RunningMoments {
  std::uint64_t count = 0;
  VectorXd mean;
  VectorXd m2;

  void add(const VectorXd& x);
  void merge(const RunningMoments& other);
  /// Unbiased sample variance per coordinate.
  VectorXd variance() const;
};

struct MonteCarloOptions {
  std::uint64_t stride = 0;      // 0 selects default_stride(horizon)
  unsigned threads = 0;          // 0 selects hardware concurrency
  std::optional<VectorXd> x0;
};

struct MonteCarloSummary {
  std::vector<std::uint64_t> steps;
  std::vector<VectorXd> mean;
  std::vector<VectorXd> variance;
  std::vector<double> covariance_trace;
  std::uint64_t trials = 0;
  Seed base_seed = 0;

  VectorXd stderr_at(std::size_t snapshot) const;
};

/// M independent forward runs; trial t uses trial_seed(base_seed, t). Trials
/// are accumulated in fixed blocks merged in block order, so the result does
/// not depend on the thread count.
MonteCarloSummary monte_carlo(const Graph& g, const VectorXd& b, double gamma,
                              std::uint64_t horizon, std::uint64_t trials, Seed base_seed,
                              const MonteCarloOptions& opts = {});

struct ForwardBackwardComparison {
  VectorXd forward_mean;
  VectorXd backward_mean;
  VectorXd forward_stderr;
  VectorXd backward_stderr;
  /// max_v |forward_mean - backward_mean| / sqrt(se_f^2 + se_b^2)
  double max_z = 0.0;
  std::uint64_t trials = 0;
};

/// Forward trials use trial_seed(base_seed, t), backward trials
/// trial_seed(base_seed, trials + t), so the two samples are independent.
ForwardBackwardComparison compare_forward_backward(const Graph& g, const VectorXd& b,
                                                   double gamma, const VectorXd& x0,
                                                   std::uint64_t horizon,
                                                   std::uint64_t trials, Seed base_seed,
                                                   unsigned threads = 0);

}  // namespace gossip_loc
