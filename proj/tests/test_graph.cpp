// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>
#include <sstream>

#include "gossip_loc/graph.hpp"
#include "gossip_loc/numerics.hpp"

using namespace gossip_loc;

namespace {

// Degree-minus-adjacency built from an unordered edge set, independent of
// the library's assembly.
MatrixXi degree_minus_adjacency(const Graph& g) {
  std::set<std::pair<NodeId, NodeId>> adj;
  for (const Edge& e : g.edges()) {
    adj.emplace(e.u, e.v);
    adj.emplace(e.v, e.u);
  }
  MatrixXi l = MatrixXi::Zero(g.n_nodes(), g.n_nodes());
  for (NodeId i = 0; i < g.n_nodes(); ++i) {
    for (NodeId j = 0; j < g.n_nodes(); ++j) {
      if (i != j && adj.count({i, j})) {
        l(i, j) = -1;
        l(i, i) += 1;
      }
    }
  }
  return l;
}

}  // namespace

TEST_CASE("build_graph keeps the smallest valid graph") {
  const Graph g = build_graph(2, {{1, 0}});
  REQUIRE(g.n_edges() == 1);
  CHECK(g.edge(0) == Edge{1, 0});
  CHECK(g.connected());
}

TEST_CASE("build_graph normalizes orientation and preserves order") {
  const Graph g = build_graph(3, {{1, 0}, {0, 2}});
  REQUIRE(g.n_edges() == 2);
  CHECK(g.edge(0) == Edge{1, 0});
  CHECK(g.edge(1) == Edge{2, 0});
}

TEST_CASE("disconnected graphs are constructible but rejected by the oracle") {
  const Graph g = build_graph(4, {{1, 0}, {3, 2}});
  CHECK_FALSE(g.connected());
  CHECK_FALSE(is_connected(g));
  const VectorXd b = VectorXd::Ones(2);
  try {
    (void)least_squares_estimate(g, b);
    FAIL("expected DisconnectedGraph");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DisconnectedGraph);
  }
}

TEST_CASE("build_graph rejects malformed input") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error thrown");
    return Errc::IoError;
  };
  CHECK(code_of([] { build_graph(3, {{1, 0}, {0, 1}}); }) == Errc::DuplicateEdge);
  CHECK(code_of([] { build_graph(3, {{1, 1}}); }) == Errc::SelfLoop);
  CHECK(code_of([] { build_graph(3, {{3, 0}}); }) == Errc::IndexOutOfRange);
  CHECK(code_of([] { build_graph(3, {{-1, 0}}); }) == Errc::IndexOutOfRange);
  CHECK(code_of([] { build_graph(1, {}); }) == Errc::IndexOutOfRange);
}

TEST_CASE("incidence matrix rows are e_u - e_v") {
  const MatrixXi single = incidence_matrix<int>(build_graph(2, {{1, 0}}));
  MatrixXi expected_single(1, 2);
  expected_single << -1, 1;
  CHECK(single == expected_single);

  const MatrixXi tri = incidence_matrix<int>(build_graph(3, {{1, 0}, {2, 0}, {2, 1}}));
  MatrixXi expected_tri(3, 3);
  expected_tri << -1, 1, 0,
                  -1, 0, 1,
                   0, -1, 1;
  CHECK(tri == expected_tri);
}

TEST_CASE("laplacian examples") {
  MatrixXi l2(2, 2);
  l2 << 1, -1, -1, 1;
  CHECK(laplacian<int>(build_graph(2, {{1, 0}})) == l2);

  const Graph tri = build_graph(3, {{1, 0}, {2, 0}, {2, 1}});
  MatrixXi l3(3, 3);
  l3 << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  CHECK(laplacian<int>(tri) == l3);
  CHECK(degree_minus_adjacency(tri) == l3);
}

TEST_CASE("incidence and Laplacian invariants over generated graphs") {
  std::vector<Graph> graphs = {generate(GraphKind::Complete, 7), generate(GraphKind::Ring, 9),
                               generate(GraphKind::Ring, 2)};
  for (Seed s = 0; s < 25; ++s) {
    graphs.push_back(generate(GraphKind::RandomGnp, 2 + static_cast<Eigen::Index>(s % 15),
                              {0.4, s}));
  }
  for (const Graph& g : graphs) {
    const MatrixXi a = incidence_matrix<int>(g);
    CHECK(a.rowwise().sum().isZero());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      CHECK((a.row(r).array() != 0).count() == 2);
    }
    CHECK(MatrixXi(a.transpose() * a) == laplacian<int>(g));
    CHECK(laplacian<int>(g) == degree_minus_adjacency(g));
    CHECK((laplacian<double>(g) * VectorXd::Ones(g.n_nodes())).isZero(0.0));
    for (const Edge& e : g.edges()) CHECK(e.u > e.v);
  }
}

TEST_CASE("is_connected") {
  CHECK(is_connected(build_graph(2, {{1, 0}})));
  CHECK_FALSE(is_connected(build_graph(4, {{1, 0}, {3, 2}})));
  for (Eigen::Index n = 2; n < 12; ++n) CHECK(is_connected(generate(GraphKind::Complete, n)));
}

TEST_CASE("generate") {
  CHECK(generate(GraphKind::Complete, 20).n_edges() == 190);

  const Graph ring = generate(GraphKind::Ring, 5);
  CHECK(ring.n_edges() == 5);
  for (int d : ring.degrees()) CHECK(d == 2);

  const Graph a = generate(GraphKind::RandomGnp, 10, {0.5, 7});
  const Graph b = generate(GraphKind::RandomGnp, 10, {0.5, 7});
  CHECK(a.connected());
  CHECK(a == b);
  CHECK_FALSE(a == generate(GraphKind::RandomGnp, 10, {0.5, 8}));

  try {
    generate(GraphKind::RandomGnp, 5, {0.0, 1, 10});
    FAIL("expected GenerationFailed");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::GenerationFailed);
  }
}

TEST_CASE("graph file round trip preserves edge order") {
  const Graph g = generate(GraphKind::RandomGnp, 12, {0.3, 5});
  std::stringstream ss;
  write_graph(ss, g);
  CHECK(read_graph(ss) == g);

  std::istringstream with_comments("# measurement graph\nN 3\n1 0 # first\n\n2 1\n");
  const Graph h = read_graph(with_comments);
  CHECK(h.n_edges() == 2);
  CHECK(h.edge(1) == Edge{2, 1});
}

TEST_CASE("graph file loader errors") {
  auto code_of = [](const std::string& text) {
    std::istringstream is(text);
    try {
      read_graph(is);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error thrown");
    return Errc::IoError;
  };
  CHECK(code_of("1 0\n") == Errc::ParseError);
  CHECK(code_of("N 3\n1\n") == Errc::ParseError);
  CHECK(code_of("N 3\n1 0 2\n") == Errc::ParseError);
  CHECK(code_of("") == Errc::ParseError);
  CHECK(code_of("N 3\n1 0\n0 1\n") == Errc::DuplicateEdge);
}
