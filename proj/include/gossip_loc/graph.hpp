// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "gossip_loc/error.hpp"
#include "gossip_loc/types.hpp"

namespace gossip_loc {

/// Oriented measurement edge. Stored edges always satisfy u > v, so the
/// incidence row is +1 at column u and -1 at column v and b_e ~ x_u - x_v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable undirected graph with a fixed, construction-ordered edge list.
/// Edge position defines the row of the incidence matrix and the entry of
/// the measurement vector.
class Graph {
 public:
  Eigen::Index n_nodes() const noexcept { return n_nodes_; }
  Eigen::Index n_edges() const noexcept {
    return static_cast<Eigen::Index>(edges_.size());
  }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(static_cast<std::size_t>(e)); }
  bool connected() const noexcept { return connected_; }

  /// Throws DisconnectedGraph unless the graph is a single component.
  void require_connected() const;

  std::vector<int> degrees() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph build_graph(Eigen::Index, std::span<const std::pair<NodeId, NodeId>>);

  Eigen::Index n_nodes_ = 0;
  std::vector<Edge> edges_;
  bool connected_ = false;
};

/// Validates the pairs, normalizes each to (larger, smaller) and computes the
/// connectivity flag. Disconnected graphs are allowed here.
Graph build_graph(Eigen::Index n_nodes,
                  std::span<const std::pair<NodeId, NodeId>> pairs);

inline Graph build_graph(Eigen::Index n_nodes,
                         std::initializer_list<std::pair<NodeId, NodeId>> pairs) {
  return build_graph(n_nodes, std::span<const std::pair<NodeId, NodeId>>(
                                  pairs.begin(), pairs.size()));
}

bool is_connected(const Graph& g);

enum class GraphKind { Complete, Ring, RandomGnp };

struct GenerateParams {
  double p = 0.5;
  Seed seed = 0;
  int max_retries = 1000;
};

/// Deterministic in (kind, n, params). RandomGnp redraws with derived seeds
/// until the sample is connected.
Graph generate(GraphKind kind, Eigen::Index n, const GenerateParams& params = {});

/// Row e is (e_u - e_v)^T for edge e = (u, v).
template <typename Scalar = double>
Matrix<Scalar> incidence_matrix(const Graph& g) {
  Matrix<Scalar> a = Matrix<Scalar>::Zero(g.n_edges(), g.n_nodes());
  EdgeIndex row = 0;
  for (const Edge& e : g.edges()) {
    a(row, e.u) = Scalar(1);
    a(row, e.v) = Scalar(-1);
    ++row;
  }
  return a;
}

/// L = A^T A, assembled directly as degree minus adjacency.
template <typename Scalar = double>
Matrix<Scalar> laplacian(const Graph& g) {
  Matrix<Scalar> l = Matrix<Scalar>::Zero(g.n_nodes(), g.n_nodes());
  for (const Edge& e : g.edges()) {
    l(e.u, e.u) += Scalar(1);
    l(e.v, e.v) += Scalar(1);
    l(e.u, e.v) -= Scalar(1);
    l(e.v, e.u) -= Scalar(1);
  }
  return l;
}

/// A^T b without forming A.
template <typename Derived>
Vector<typename Derived::Scalar> incidence_transpose_times(
    const Graph& g, const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  if (b.size() != g.n_edges()) {
    throw Error(Errc::DimensionMismatch, "measurement vector length differs from edge count");
  }
  Vector<Scalar> out = Vector<Scalar>::Zero(g.n_nodes());
  EdgeIndex row = 0;
  for (const Edge& e : g.edges()) {
    out(e.u) += b(row);
    out(e.v) -= b(row);
    ++row;
  }
  return out;
}

// Text format: "N <n>" then one "<u> <v>" line per edge. '#' starts a comment.
void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);

}  // namespace gossip_loc
