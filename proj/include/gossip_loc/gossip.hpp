// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

#include "gossip_loc/error.hpp"
#include "gossip_loc/graph.hpp"
#include "gossip_loc/numerics.hpp"
#include "gossip_loc/rng.hpp"
#include "gossip_loc/types.hpp"

namespace gossip_loc {

/// Per-node triple (raw estimate, local update count, local time-average)
/// plus the global step count, which only the simulator sees.
template <typename Scalar = double>
struct GossipState {
  Vector<Scalar> x;
  Vector<std::int64_t> kappa;
  Vector<Scalar> xtilde;
  std::uint64_t k = 0;

  friend bool operator==(const GossipState&, const GossipState&) = default;
};

/// Zero counters and xtilde = x0. A node never touched keeps reporting x0.
template <typename Scalar = double>
GossipState<Scalar> init_state(const Graph& g,
                               const std::optional<Vector<Scalar>>& x0 = std::nullopt) {
  GossipState<Scalar> s;
  if (x0) {
    if (x0->size() != g.n_nodes()) {
      throw Error(Errc::DimensionMismatch, "initial state length differs from node count");
    }
    s.x = *x0;
  } else {
    s.x = Vector<Scalar>::Zero(g.n_nodes());
  }
  s.kappa = Vector<std::int64_t>::Zero(g.n_nodes());
  s.xtilde = s.x;
  return s;
}

/// Zero-sum conservation and the ergodic guarantee only hold for
/// zero-mean initial states.
template <typename Derived>
bool is_zero_mean(const Eigen::MatrixBase<Derived>& x, double tol = 1e-12) {
  using std::abs;
  const double scale = std::max(1.0, static_cast<double>(x.cwiseAbs().maxCoeff()));
  return abs(static_cast<double>(x.sum())) <= tol * scale * static_cast<double>(x.size());
}

/// One pairwise update on edge (u, v) with measurement b_e ~ x_u - x_v.
///
/// Both raw values are computed from the pre-step pair through a shared
/// increment d = gamma (x_v - x_u + b_e):  x_u += d,  x_v -= d.  This is the
/// convex-combination form rearranged, and it leaves x_u + x_v and the
/// consensus fixed point x_u = x_v (b_e = 0) untouched in floating point.
/// Counters and time-averages then absorb the post-update values.
template <typename Scalar>
void apply_step(GossipState<Scalar>& s, const Edge& e, Scalar b_e, Scalar gamma) {
  check_gamma(gamma);
  if (e.u == e.v) throw Error(Errc::SelfLoop, "gossip step on a self loop");
  const Scalar d = gamma * (s.x(e.v) - s.x(e.u) + b_e);
  s.x(e.u) += d;
  s.x(e.v) -= d;
  for (const NodeId w : {e.u, e.v}) {
    const std::int64_t before = s.kappa(w);
    s.kappa(w) = before + 1;
    s.xtilde(w) = (Scalar(before) * s.xtilde(w) + s.x(w)) / Scalar(before + 1);
  }
  ++s.k;
}

template <typename Scalar>
GossipState<Scalar> step(GossipState<Scalar> s, const Edge& e, Scalar b_e, Scalar gamma) {
  apply_step(s, e, b_e, gamma);
  return s;
}

/// I.i.d. uniform edge indices on [0, |E|).
class EdgeSampler {
 public:
  EdgeSampler(Eigen::Index n_edges, Seed seed) : rng_(seed), dist_(0, n_edges - 1) {
    if (n_edges < 1) throw Error(Errc::IndexOutOfRange, "edge sampler needs |E| >= 1");
  }

  EdgeIndex operator()() { return dist_(rng_); }

 private:
  Rng rng_;
  std::uniform_int_distribution<EdgeIndex> dist_;
};

/// Single-threaded simulator of the randomized gossip dynamics.
template <typename Scalar = double>
class GossipEngine {
 public:
  GossipEngine(const Graph& g, Vector<Scalar> b, Scalar gamma, Seed seed,
               GossipState<Scalar> initial)
      : graph_(&g),
        b_(std::move(b)),
        gamma_(gamma),
        sampler_(g.n_edges(), seed),
        state_(std::move(initial)) {
    check_gamma(gamma_);
    if (b_.size() != g.n_edges()) {
      throw Error(Errc::DimensionMismatch, "measurement vector length differs from edge count");
    }
    if (state_.x.size() != g.n_nodes()) {
      throw Error(Errc::DimensionMismatch, "state length differs from node count");
    }
  }

  EdgeIndex step_once() {
    const EdgeIndex e = sampler_();
    apply_step(state_, graph_->edge(e), b_(e), gamma_);
    return e;
  }

  /// Observer is called as observer(state, edge_index) after every step.
  template <typename Observer>
  void advance(std::uint64_t steps, Observer&& observer) {
    for (std::uint64_t i = 0; i < steps; ++i) {
      const EdgeIndex e = step_once();
      observer(std::as_const(state_), e);
    }
  }

  void advance(std::uint64_t steps) {
    advance(steps, [](const GossipState<Scalar>&, EdgeIndex) {});
  }

  const GossipState<Scalar>& state() const noexcept { return state_; }
  const Graph& graph() const noexcept { return *graph_; }
  Scalar gamma() const noexcept { return gamma_; }

 private:
  const Graph* graph_;
  Vector<Scalar> b_;
  Scalar gamma_;
  EdgeSampler sampler_;
  GossipState<Scalar> state_;
};

/// max(1, K/1000).
inline std::uint64_t default_stride(std::uint64_t horizon) {
  return std::max<std::uint64_t>(1, horizon / 1000);
}

template <typename Scalar = double>
struct Trajectory {
  std::uint64_t stride = 1;
  std::vector<GossipState<Scalar>> snapshots;
};

/// Records the initial state, every state with k % stride == 0, and the
/// final state.
template <typename Scalar = double>
class TrajectoryRecorder {
 public:
  explicit TrajectoryRecorder(std::uint64_t stride) { trajectory_.stride = std::max<std::uint64_t>(1, stride); }

  void record(const GossipState<Scalar>& s) {
    if (!trajectory_.snapshots.empty() && trajectory_.snapshots.back().k == s.k) return;
    trajectory_.snapshots.push_back(s);
  }

  void operator()(const GossipState<Scalar>& s, EdgeIndex) {
    if (s.k % trajectory_.stride == 0) record(s);
  }

  Trajectory<Scalar> take() && { return std::move(trajectory_); }

 private:
  Trajectory<Scalar> trajectory_;
};

struct RunOptions {
  std::uint64_t stride = 0;  // 0 selects default_stride(horizon)
  std::optional<VectorXd> x0;
};

/// Run `horizon` steps and return snapshots at the configured stride plus the
/// final state. Deterministic in `seed`.
template <typename Observer>
Trajectory<double> run(const Graph& g, const VectorXd& b, double gamma, std::uint64_t horizon,
                       Seed seed, const RunOptions& opts, Observer&& observer) {
  GossipEngine<double> engine(g, b, gamma, seed, init_state<double>(g, opts.x0));
  TrajectoryRecorder<double> recorder(opts.stride ? opts.stride : default_stride(horizon));
  recorder.record(engine.state());
  engine.advance(horizon, [&](const GossipState<double>& s, EdgeIndex e) {
    recorder(s, e);
    observer(s, e);
  });
  recorder.record(engine.state());
  return std::move(recorder).take();
}

inline Trajectory<double> run(const Graph& g, const VectorXd& b, double gamma,
                              std::uint64_t horizon, Seed seed, const RunOptions& opts = {}) {
  return run(g, b, gamma, horizon, seed, opts, [](const GossipState<double>&, EdgeIndex) {});
}

/// Columns k,node,x,kappa,xtilde; one row per (snapshot, node).
template <typename Scalar>
void write_trajectory_csv(std::ostream& os, const Trajectory<Scalar>& t) {
  os << "k,node,x,kappa,xtilde\n" << std::setprecision(17);
  for (const auto& s : t.snapshots) {
    for (Eigen::Index v = 0; v < s.x.size(); ++v) {
      os << s.k << ',' << v << ',' << s.x(v) << ',' << s.kappa(v) << ',' << s.xtilde(v) << '\n';
    }
  }
}

}  // namespace gossip_loc
