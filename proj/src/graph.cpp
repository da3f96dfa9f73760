// SPDX-License-Identifier: Apache-2.0

#include "gossip_loc/graph.hpp"

#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "gossip_loc/rng.hpp"

namespace gossip_loc {

namespace {

// Union-find with path halving.
NodeId find_root(std::vector<NodeId>& parent, NodeId x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

bool components_are_one(Eigen::Index n, std::span<const Edge> edges) {
  std::vector<NodeId> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), NodeId{0});
  Eigen::Index components = n;
  for (const Edge& e : edges) {
    NodeId a = find_root(parent, e.u);
    NodeId b = find_root(parent, e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

void Graph::require_connected() const {
  if (!connected_) {
    throw Error(Errc::DisconnectedGraph,
                "operation requires a connected graph (" + std::to_string(n_nodes_) +
                    " nodes, " + std::to_string(edges_.size()) + " edges)");
  }
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n_nodes_), 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

Graph build_graph(Eigen::Index n_nodes,
                  std::span<const std::pair<NodeId, NodeId>> pairs) {
  if (n_nodes < 2) {
    throw Error(Errc::IndexOutOfRange, "a graph needs at least 2 nodes");
  }
  Graph g;
  g.n_nodes_ = n_nodes;
  g.edges_.reserve(pairs.size());
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= n_nodes || b >= n_nodes) {
      throw Error(Errc::IndexOutOfRange, "edge (" + std::to_string(a) + "," +
                                             std::to_string(b) + ") outside [0," +
                                             std::to_string(n_nodes) + ")");
    }
    if (a == b) {
      throw Error(Errc::SelfLoop, "self loop at node " + std::to_string(a));
    }
    Edge e{std::max(a, b), std::min(a, b)};
    if (!seen.emplace(e.u, e.v).second) {
      throw Error(Errc::DuplicateEdge, "duplicate edge {" + std::to_string(e.u) + "," +
                                           std::to_string(e.v) + "}");
    }
    g.edges_.push_back(e);
  }
  g.connected_ = components_are_one(n_nodes, g.edges_);
  return g;
}

bool is_connected(const Graph& g) { return components_are_one(g.n_nodes(), g.edges()); }

Graph generate(GraphKind kind, Eigen::Index n, const GenerateParams& params) {
  if (n < 2) {
    throw Error(Errc::IndexOutOfRange, "generate needs n >= 2");
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  switch (kind) {
    case GraphKind::Complete:
      for (NodeId u = 1; u < n; ++u) {
        for (NodeId v = 0; v < u; ++v) pairs.emplace_back(u, v);
      }
      return build_graph(n, pairs);
    case GraphKind::Ring:
      for (NodeId u = 1; u < n; ++u) pairs.emplace_back(u, u - 1);
      // n == 2 would duplicate the single edge.
      if (n > 2) pairs.emplace_back(n - 1, 0);
      return build_graph(n, pairs);
    case GraphKind::RandomGnp: {
      if (!(params.p >= 0.0 && params.p <= 1.0)) {
        throw Error(Errc::GenerationFailed, "edge probability must lie in [0,1]");
      }
      for (int attempt = 0; attempt < params.max_retries; ++attempt) {
        Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(attempt)));
        std::bernoulli_distribution coin(params.p);
        pairs.clear();
        for (NodeId u = 1; u < n; ++u) {
          for (NodeId v = 0; v < u; ++v) {
            if (coin(rng)) pairs.emplace_back(u, v);
          }
        }
        Graph g = build_graph(n, pairs);
        if (g.connected()) return g;
      }
      throw Error(Errc::GenerationFailed,
                  "no connected G(n,p) sample within " +
                      std::to_string(params.max_retries) + " attempts");
    }
  }
  throw Error(Errc::GenerationFailed, "unknown graph kind");
}

void write_graph(std::ostream& os, const Graph& g) {
  os << "N " << g.n_nodes() << '\n';
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

Graph read_graph(std::istream& is) {
  std::string line;
  int line_no = 0;
  Eigen::Index n = -1;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (n < 0) {
      if (first != "N" || !(ls >> n)) {
        throw Error(Errc::ParseError,
                    "line " + std::to_string(line_no) + ": expected header 'N <n_nodes>'");
      }
    } else {
      NodeId u = 0, v = 0;
      std::istringstream fs(first);
      if (!(fs >> u) || !(ls >> v)) {
        throw Error(Errc::ParseError,
                    "line " + std::to_string(line_no) + ": expected '<u> <v>'");
      }
      pairs.emplace_back(u, v);
    }
    std::string rest;
    if (ls >> rest) {
      throw Error(Errc::ParseError,
                  "line " + std::to_string(line_no) + ": trailing tokens");
    }
  }
  if (n < 0) throw Error(Errc::ParseError, "missing 'N <n_nodes>' header");
  return build_graph(n, pairs);
}

}  // namespace gossip_loc
