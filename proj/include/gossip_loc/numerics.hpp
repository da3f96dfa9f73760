// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <string>

#include "gossip_loc/error.hpp"
#include "gossip_loc/graph.hpp"
#include "gossip_loc/types.hpp"

namespace gossip_loc {

template <typename Scalar>
void check_gamma(Scalar gamma) {
  if (!(gamma > Scalar(0) && gamma < Scalar(1))) {
    throw Error(Errc::GammaOutOfRange, "gamma must lie in (0,1)");
  }
}

/// Moore-Penrose pseudo-inverse of a connected-graph Laplacian through the
/// rank-one shift L^+ = (L + 11^T/N)^{-1} - 11^T/N.
///
/// The shift only removes the known nullspace span{1}; a numerically singular
/// shifted matrix means the nullspace is larger (disconnected graph).
template <typename Derived>
Matrix<typename Derived::Scalar> laplacian_pseudoinverse(
    const Eigen::MatrixBase<Derived>& laplacian) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = laplacian.rows();
  if (laplacian.cols() != n) {
    throw Error(Errc::DimensionMismatch, "Laplacian must be square");
  }
  const Scalar inv_n = Scalar(1) / Scalar(n);
  const Matrix<Scalar> averaging = Matrix<Scalar>::Constant(n, n, inv_n);
  Eigen::LDLT<Matrix<Scalar>> ldlt(laplacian + averaging);
  // Pivots of an SPD LDLT are bounded below by the smallest eigenvalue.
  const Vector<Scalar> pivots = ldlt.vectorD();
  const Scalar pivot_floor = Scalar(10) * Scalar(n) * std::numeric_limits<Scalar>::epsilon() *
                             pivots.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(pivots.minCoeff() > pivot_floor)) {
    throw Error(Errc::SingularBeyondNullspace,
                "shifted Laplacian is singular; the graph is not connected");
  }
  Matrix<Scalar> pinv = ldlt.solve(Matrix<Scalar>::Identity(n, n)) - averaging;
  return (pinv + pinv.transpose()) * Scalar(0.5);
}

/// Minimum-norm least-squares solution x* = L^+ A^T b of min ||Az - b||.
template <typename Derived>
Vector<typename Derived::Scalar> least_squares_estimate(
    const Graph& g, const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  g.require_connected();
  const Vector<Scalar> rhs = incidence_transpose_times(g, b);
  Vector<Scalar> x = laplacian_pseudoinverse(laplacian<Scalar>(g)) * rhs;
  // Remove round-off drift along the nullspace.
  x.array() -= x.mean();
  return x;
}

template <typename Scalar>
struct PowerIterationResult {
  Scalar value = Scalar(0);
  int iterations = 0;
  bool converged = false;
};

struct PowerIterationOptions {
  double relative_tolerance = 1e-12;
  int max_iterations = 200000;
};

/// Largest singular value by power iteration on M^T M, starting from the
/// fixed vector (1, 2, ..., n)/||.||. Never throws; check `converged`.
template <typename Derived>
PowerIterationResult<typename Derived::Scalar> power_iteration_norm(
    const Eigen::MatrixBase<Derived>& m, const PowerIterationOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  PowerIterationResult<Scalar> result;
  const Eigen::Index n = m.cols();
  if (n == 0 || m.rows() == 0) {
    result.converged = true;
    return result;
  }
  Vector<Scalar> v = Vector<Scalar>::LinSpaced(n, Scalar(1), Scalar(n));
  v.normalize();
  Scalar sigma_sq = (m * v).squaredNorm();
  for (int it = 1; it <= opts.max_iterations; ++it) {
    Vector<Scalar> w = m.transpose() * (m * v);
    const Scalar w_norm = w.norm();
    result.iterations = it;
    if (w_norm == Scalar(0)) {
      // M annihilates the iterate, e.g. M = 0.
      sigma_sq = Scalar(0);
      result.converged = true;
      break;
    }
    v = w / w_norm;
    const Scalar next = (m * v).squaredNorm();
    const bool done = std::abs(next - sigma_sq) <= Scalar(opts.relative_tolerance) * next;
    sigma_sq = next;
    if (done) {
      result.converged = true;
      break;
    }
  }
  result.value = std::sqrt(sigma_sq);
  return result;
}

/// Spectral norm ||M||_2; throws NoConvergence (message carries the best
/// estimate) when the power iteration hits its cap.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m,
                                       const PowerIterationOptions& opts = {}) {
  if (!m.allFinite()) {
    throw Error(Errc::NoConvergence, "spectral_norm of a non-finite matrix");
  }
  const auto r = power_iteration_norm(m, opts);
  if (!r.converged) {
    throw Error(Errc::NoConvergence, "power iteration stopped after " +
                                         std::to_string(r.iterations) +
                                         " iterations; best estimate " +
                                         std::to_string(r.value));
  }
  return r.value;
}

/// E[Q(k)] = I - gamma L / |E| under uniform edge selection.
template <typename Scalar = double>
Matrix<Scalar> expected_update_matrix(const Graph& g, Scalar gamma) {
  check_gamma(gamma);
  const Scalar scale = gamma / Scalar(g.n_edges());
  return Matrix<Scalar>::Identity(g.n_nodes(), g.n_nodes()) - scale * laplacian<Scalar>(g);
}

/// E[y(k)] = gamma A^T b / |E|.
template <typename Derived>
Vector<typename Derived::Scalar> expected_input(const Graph& g,
                                                typename Derived::Scalar gamma,
                                                const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  return (gamma / Scalar(g.n_edges())) * incidence_transpose_times(g, b);
}

/// I - 11^T/N, the projector off the consensus direction.
template <typename Scalar = double>
Matrix<Scalar> consensus_complement(Eigen::Index n) {
  return Matrix<Scalar>::Identity(n, n) - Matrix<Scalar>::Constant(n, n, Scalar(1) / Scalar(n));
}

/// rho = ||(I - 11^T/N) E[Q]||_2, strictly below 1 for connected graphs.
template <typename Scalar = double>
Scalar contraction_factor(const Graph& g, Scalar gamma) {
  g.require_connected();
  const Matrix<Scalar> projected =
      consensus_complement<Scalar>(g.n_nodes()) * expected_update_matrix(g, gamma);
  const Scalar rho = spectral_norm(projected);
  if (!(rho < Scalar(1))) {
    throw Error(Errc::NoConvergence, "contraction factor is not below 1");
  }
  return rho;
}

}  // namespace gossip_loc
