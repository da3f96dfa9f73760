// SPDX-License-Identifier: Apache-2.0

#include "gossip_loc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "gossip_loc/error.hpp"
#include "gossip_loc/gossip.hpp"
#include "gossip_loc/numerics.hpp"
#include "gossip_loc/rng.hpp"

namespace gossip_loc {

namespace {

constexpr std::uint64_t kTrialsPerBlock = 64;

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, n_items) into fixed-size blocks, evaluates up to `threads`
// blocks at a time and folds them into `merge` strictly in block order.
template <typename Acc, typename Work, typename Merge>
void for_each_block(std::uint64_t n_items, unsigned threads, Work&& work, Merge&& merge) {
  const std::uint64_t n_blocks = (n_items + kTrialsPerBlock - 1) / kTrialsPerBlock;
  for (std::uint64_t first = 0; first < n_blocks; first += threads) {
    const std::uint64_t wave = std::min<std::uint64_t>(threads, n_blocks - first);
    std::vector<Acc> results(wave);
    std::vector<std::exception_ptr> errors(wave);
    auto task = [&](std::uint64_t slot) {
      const std::uint64_t block = first + slot;
      const std::uint64_t begin = block * kTrialsPerBlock;
      const std::uint64_t end = std::min(n_items, begin + kTrialsPerBlock);
      try {
        results[slot] = work(begin, end);
      } catch (...) {
        errors[slot] = std::current_exception();
      }
    };
    {
      std::vector<std::jthread> pool;
      for (std::uint64_t slot = 1; slot < wave; ++slot) pool.emplace_back(task, slot);
      task(0);
    }
    for (std::uint64_t slot = 0; slot < wave; ++slot) {
      if (errors[slot]) std::rethrow_exception(errors[slot]);
      merge(std::move(results[slot]));
    }
  }
}

std::vector<std::uint64_t> snapshot_grid(std::uint64_t horizon, std::uint64_t stride) {
  std::vector<std::uint64_t> steps;
  for (std::uint64_t k = 0; k <= horizon; k += stride) steps.push_back(k);
  if (steps.back() != horizon) steps.push_back(horizon);
  return steps;
}

VectorXd resolve_x0(const Graph& g, const std::optional<VectorXd>& x0) {
  if (!x0) return VectorXd::Zero(g.n_nodes());
  if (x0->size() != g.n_nodes()) {
    throw Error(Errc::DimensionMismatch, "initial state length differs from node count");
  }
  return *x0;
}

}  // namespace

ExpectedTrajectory expected_trajectory(const Graph& g, double gamma, const VectorXd& b,
                                       const VectorXd& x0, std::uint64_t horizon,
                                       std::uint64_t stride) {
  g.require_connected();
  if (x0.size() != g.n_nodes()) {
    throw Error(Errc::DimensionMismatch, "initial state length differs from node count");
  }
  stride = std::max<std::uint64_t>(1, stride);
  const MatrixXd eq = expected_update_matrix(g, gamma);
  const VectorXd ey = expected_input(g, gamma, b);

  ExpectedTrajectory out;
  VectorXd m = x0;
  out.steps.push_back(0);
  out.means.push_back(m);
  for (std::uint64_t k = 1; k <= horizon; ++k) {
    m = eq * m + ey;
    if (k % stride == 0 || k == horizon) {
      out.steps.push_back(k);
      out.means.push_back(m);
    }
  }
  return out;
}

VectorXd forward_endpoint(const Graph& g, const VectorXd& b, double gamma, const VectorXd& x0,
                          std::uint64_t horizon, Seed seed) {
  GossipEngine<double> engine(g, b, gamma, seed, init_state<double>(g, x0));
  engine.advance(horizon);
  return engine.state().x;
}

VectorXd backward_trajectory(const Graph& g, const VectorXd& b, double gamma,
                             const VectorXd& x0, std::uint64_t horizon, Seed seed) {
  check_gamma(gamma);
  if (b.size() != g.n_edges()) {
    throw Error(Errc::DimensionMismatch, "measurement vector length differs from edge count");
  }
  GossipState<double> s = init_state<double>(g, x0);
  if (!is_zero_mean(x0)) {
    throw Error(Errc::NonZeroMeanInit, "backward process needs a zero-mean initial state");
  }
  EdgeSampler sampler(g.n_edges(), seed);
  std::vector<EdgeIndex> edges(horizon);
  for (auto& e : edges) e = sampler();
  // Horner form: v <- P(l) v + y(l) for l = K-1, ..., 0.
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    apply_step(s, g.edge(*it), b(*it), gamma);
  }
  return s.x;
}

Subsequence Subsequence::indices(std::vector<std::uint64_t> idx) {
  std::sort(idx.begin(), idx.end());
  return Subsequence(Kind::Indices, std::move(idx));
}

std::uint64_t Subsequence::multiplicity(std::uint64_t k) const {
  switch (kind_) {
    case Kind::All: return 1;
    case Kind::Even: return k % 2 == 0 ? 1 : 0;
    case Kind::Indices: {
      const auto [lo, hi] = std::equal_range(indices_.begin(), indices_.end(), k);
      return static_cast<std::uint64_t>(hi - lo);
    }
  }
  return 0;
}

VectorXd ergodic_mean(std::span<const VectorXd> samples, const Subsequence& sub) {
  if (sub.kind() == Subsequence::Kind::Indices) {
    for (const std::uint64_t i : sub.index_list()) {
      if (i >= samples.size()) {
        throw Error(Errc::IndexOutOfRange,
                    "subsequence index " + std::to_string(i) + " beyond " +
                        std::to_string(samples.size()) + " samples");
      }
    }
  }
  if (samples.empty()) throw Error(Errc::EmptySelection, "no samples");
  ErgodicAccumulator acc(samples.front().size(), sub);
  for (std::size_t i = 0; i < samples.size(); ++i) acc.add(i, samples[i]);
  return acc.mean();
}

ErgodicAccumulator::ErgodicAccumulator(Eigen::Index n, Subsequence sub)
    : sub_(std::move(sub)), sum_(VectorXd::Zero(n)), compensation_(VectorXd::Zero(n)) {}

void ErgodicAccumulator::add(std::uint64_t k, const VectorXd& x) {
  const std::uint64_t m = sub_.multiplicity(k);
  if (m == 0) return;
  if (x.size() != sum_.size()) {
    throw Error(Errc::DimensionMismatch, "sample length differs from accumulator");
  }
  // Kahan summation.
  const VectorXd term = static_cast<double>(m) * x - compensation_;
  const VectorXd next = sum_ + term;
  compensation_ = (next - sum_) - term;
  sum_ = next;
  count_ += m;
}

VectorXd ErgodicAccumulator::mean() const {
  if (count_ == 0) throw Error(Errc::EmptySelection, "subsequence selected no samples");
  return sum_ / static_cast<double>(count_);
}

ErrorMetrics error_metrics(const VectorXd& estimate, const VectorXd& oracle) {
  if (estimate.size() != oracle.size()) {
    throw Error(Errc::DimensionMismatch, "estimate and oracle differ in length");
  }
  const VectorXd diff = estimate - oracle;
  ErrorMetrics m;
  m.rel_l2 = diff.norm() / std::max(oracle.norm(), 1e-14);
  m.linf = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
  m.mean_shift = diff.size() ? std::abs(diff.sum()) / static_cast<double>(diff.size()) : 0.0;
  return m;
}

void RunningMoments::add(const VectorXd& x) {
  if (count == 0) {
    mean = VectorXd::Zero(x.size());
    m2 = VectorXd::Zero(x.size());
  }
  ++count;
  const VectorXd delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta.cwiseProduct(x - mean);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(other.count);
  const double n = na + nb;
  const VectorXd delta = other.mean - mean;
  mean += delta * (nb / n);
  m2 += other.m2 + delta.cwiseAbs2() * (na * nb / n);
  count += other.count;
}

VectorXd RunningMoments::variance() const {
  if (count < 2) return VectorXd::Zero(mean.size());
  return m2 / static_cast<double>(count - 1);
}

VectorXd MonteCarloSummary::stderr_at(std::size_t snapshot) const {
  return (variance.at(snapshot) / static_cast<double>(trials)).cwiseSqrt();
}

MonteCarloSummary monte_carlo(const Graph& g, const VectorXd& b, double gamma,
                              std::uint64_t horizon, std::uint64_t trials, Seed base_seed,
                              const MonteCarloOptions& opts) {
  if (trials < 2) throw Error(Errc::ValidationError, "Monte Carlo needs at least 2 trials", "trials");
  check_gamma(gamma);
  const VectorXd x0 = resolve_x0(g, opts.x0);
  const std::vector<std::uint64_t> steps =
      snapshot_grid(horizon, opts.stride ? opts.stride : default_stride(horizon));

  using Acc = std::vector<RunningMoments>;
  Acc total(steps.size());
  for_each_block<Acc>(
      trials, resolve_threads(opts.threads),
      [&](std::uint64_t begin, std::uint64_t end) {
        Acc acc(steps.size());
        for (std::uint64_t t = begin; t < end; ++t) {
          GossipEngine<double> engine(g, b, gamma, trial_seed(base_seed, t),
                                      init_state<double>(g, x0));
          for (std::size_t i = 0; i < steps.size(); ++i) {
            engine.advance(steps[i] - engine.state().k);
            acc[i].add(engine.state().x);
          }
        }
        return acc;
      },
      [&](Acc&& block) {
        for (std::size_t i = 0; i < steps.size(); ++i) total[i].merge(block[i]);
      });

  MonteCarloSummary out;
  out.steps = steps;
  out.trials = trials;
  out.base_seed = base_seed;
  for (const RunningMoments& m : total) {
    out.mean.push_back(m.mean);
    out.variance.push_back(m.variance());
    out.covariance_trace.push_back(out.variance.back().sum());
  }
  return out;
}

ForwardBackwardComparison compare_forward_backward(const Graph& g, const VectorXd& b,
                                                   double gamma, const VectorXd& x0,
                                                   std::uint64_t horizon,
                                                   std::uint64_t trials, Seed base_seed,
                                                   unsigned threads) {
  if (trials < 2) throw Error(Errc::ValidationError, "comparison needs at least 2 trials", "trials");
  if (!is_zero_mean(x0)) {
    throw Error(Errc::NonZeroMeanInit, "backward process needs a zero-mean initial state");
  }
  struct Acc {
    RunningMoments forward;
    RunningMoments backward;
  };
  Acc total;
  for_each_block<Acc>(
      trials, resolve_threads(threads),
      [&](std::uint64_t begin, std::uint64_t end) {
        Acc acc;
        for (std::uint64_t t = begin; t < end; ++t) {
          acc.forward.add(forward_endpoint(g, b, gamma, x0, horizon, trial_seed(base_seed, t)));
          acc.backward.add(
              backward_trajectory(g, b, gamma, x0, horizon, trial_seed(base_seed, trials + t)));
        }
        return acc;
      },
      [&](Acc&& block) {
        total.forward.merge(block.forward);
        total.backward.merge(block.backward);
      });

  ForwardBackwardComparison out;
  const double m = static_cast<double>(trials);
  out.trials = trials;
  out.forward_mean = total.forward.mean;
  out.backward_mean = total.backward.mean;
  out.forward_stderr = (total.forward.variance() / m).cwiseSqrt();
  out.backward_stderr = (total.backward.variance() / m).cwiseSqrt();
  const VectorXd combined =
      (out.forward_stderr.cwiseAbs2() + out.backward_stderr.cwiseAbs2()).cwiseSqrt();
  for (Eigen::Index v = 0; v < combined.size(); ++v) {
    const double gap = std::abs(out.forward_mean(v) - out.backward_mean(v));
    const double z = combined(v) > 0.0 ? gap / combined(v) : (gap > 0.0 ? INFINITY : 0.0);
    out.max_z = std::max(out.max_z, z);
  }
  return out;
}

}  // namespace gossip_loc
