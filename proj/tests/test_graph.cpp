#include "doctest.h"
#include "matnet/graph.hpp"
#include "test_support.hpp"

using namespace matnet;

namespace {

const MatQ kW1{{1, 2}, {2, 1}};
const MatQ kW2{{2, 1}, {1, 2}};

// Four-node network: positive edges 1-2, 1-3 with W1, negative edges 2-4,
// 3-4 with W2, leader 1. (0-based ids internally.)
Graph four_node_graph() {
  return Graph(4, 2,
               {{0, 1, EdgeSign::positive, kW1},
                {0, 2, EdgeSign::positive, kW1},
                {1, 3, EdgeSign::negative, kW2},
                {2, 3, EdgeSign::negative, kW2}},
               {0});
}

}  // namespace

TEST_CASE("construction validates invariants") {
  CHECK_THROWS_AS(Graph(3, 2, {{0, 0, EdgeSign::positive, kW1}}, {0}),
                  std::invalid_argument);  // self-loop
  CHECK_THROWS_AS(Graph(3, 2,
                        {{0, 1, EdgeSign::positive, kW1},
                         {1, 0, EdgeSign::negative, kW2}},
                        {0}),
                  std::invalid_argument);  // duplicate unordered pair
  CHECK_THROWS_AS(Graph(3, 2, {{0, 1, EdgeSign::positive, MatQ{{1, 2}, {3, 4}}}},
                        {0}),
                  std::invalid_argument);  // asymmetric weight
  CHECK_THROWS_AS(Graph(3, 2, {{0, 1, EdgeSign::positive, MatQ::zero(2, 2)}},
                        {0}),
                  std::invalid_argument);  // zero weight
  CHECK_THROWS_AS(Graph(3, 2, {}, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, 2, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, 2, {}, {3}), std::invalid_argument);
}

TEST_CASE("adjacency blocks") {
  const Graph g = four_node_graph();
  CHECK(g.adjacency_block(1, 2) == MatQ::zero(2, 2));  // no edge 2-3
  CHECK(g.adjacency_block(0, 1) == kW1);               // positive edge
  CHECK(g.adjacency_block(1, 3) == -kW2);              // negative edge
  CHECK(g.adjacency_block(0, 1) == g.adjacency_block(1, 0));
  CHECK_THROWS_AS(g.adjacency_block(0, 7), std::invalid_argument);
}

TEST_CASE("degrees") {
  const Graph g = four_node_graph();
  CHECK(g.degree(0) == kW1 + kW1);  // [[2,4],[4,2]]
  CHECK(g.degree(0) == MatQ{{2, 4}, {4, 2}});
  CHECK(g.degree(1) == kW1 + kW2);
  CHECK(g.degree(3) == kW2 + kW2);

  const Graph isolated(3, 2, {{0, 1, EdgeSign::positive, kW1}}, {0});
  CHECK(isolated.degree(2) == MatQ::zero(2, 2));

  // d = 1 scalar graph: two unit edges at node 0 give degree [[2]].
  const Graph scalar(3, 1,
                     {{0, 1, EdgeSign::positive, MatQ{{1}}},
                      {0, 2, EdgeSign::positive, MatQ{{1}}}},
                     {0});
  CHECK(scalar.degree(0) == MatQ{{2}});
}

TEST_CASE("laplacian assembly") {
  SUBCASE("edgeless graph gives the zero matrix") {
    const Graph g(3, 2, {}, {0});
    CHECK(g.laplacian() == MatQ::zero(6, 6));
  }
  SUBCASE("two-node positive edge subgraph") {
    // Diagonal blocks equal the weight, off-diagonal its negation.
    const Graph g(3, 2, {{0, 1, EdgeSign::positive, kW1}}, {0});
    MatQ expected = MatQ::zero(6, 6);
    expected.set_block(0, 0, kW1);
    expected.set_block(2, 2, kW1);
    expected.set_block(0, 2, -kW1);
    expected.set_block(2, 0, -kW1);
    CHECK(g.laplacian() == expected);
  }
  SUBCASE("d = 1 path 1-2-3 with unit weights") {
    const Graph g(3, 1,
                  {{0, 1, EdgeSign::positive, MatQ{{1}}},
                   {1, 2, EdgeSign::positive, MatQ{{1}}}},
                  {0});
    CHECK(g.laplacian() == MatQ{{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}});
  }
  SUBCASE("negative edges add magnitudes on the diagonal") {
    const Graph g = four_node_graph();
    const MatQ l = g.laplacian();
    CHECK(l.is_symmetric());
    CHECK(l.block(2, 2, 2, 2) == kW1 + kW2);  // degree of node 2
    CHECK(l.block(2, 6, 2, 2) == kW2);        // minus signed block = +W2
  }
}

TEST_CASE("laplacian is symmetric on random graphs") {
  testing::Rng rng(27);
  for (int trial = 0; trial < 25; ++trial) {
    const Graph g = testing::random_graph(rng, testing::uniform(rng, 2, 6),
                                          testing::uniform(rng, 1, 3));
    CHECK(g.laplacian().is_symmetric());
  }
}

TEST_CASE("all-positive graphs annihilate the consensus directions") {
  testing::Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testing::uniform(rng, 2, 5);
    const int d = testing::uniform(rng, 1, 3);
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (testing::uniform(rng, 0, 1))
          edges.push_back({i, j, EdgeSign::positive,
                           testing::random_symmetric_nonzero(rng, d)});
    const Graph g(n, d, std::move(edges), {0});
    const MatQ l = g.laplacian();
    for (int basis = 0; basis < d; ++basis) {
      MatQ stacked(d * n, 1);
      for (int node = 0; node < n; ++node)
        stacked(d * node + basis, 0) = Rational{1};
      CHECK((l * stacked).is_zero());
    }
  }
}

TEST_CASE("scalar special case matches a hand Laplacian oracle") {
  testing::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testing::uniform(rng, 2, 6);
    std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!testing::uniform(rng, 0, 1)) continue;
        int value = 0;
        while (value == 0) value = testing::uniform(rng, -3, 3);
        w[i][j] = w[j][i] = value;
        edges.push_back({i, j,
                         value > 0 ? EdgeSign::positive : EdgeSign::negative,
                         MatQ{{Rational{std::abs(value)}}}});
      }
    const Graph g(n, 1, std::move(edges), {0});
    const MatQ l = g.laplacian();
    for (int i = 0; i < n; ++i) {
      int degree = 0;
      for (int j = 0; j < n; ++j) degree += std::abs(w[i][j]);
      CHECK(l(i, i) == Rational{degree});
      for (int j = 0; j < n; ++j)
        if (j != i) CHECK(l(i, j) == Rational{-w[i][j]});
    }
  }
}

TEST_CASE("definiteness classification") {
  CHECK(classify_definiteness(MatQ::identity(2)) ==
        Definiteness::positive_definite);
  CHECK(classify_definiteness(MatQ{{1, 1}, {1, 1}}) ==
        Definiteness::positive_semidefinite);
  // Eigenvalues 3 and -1.
  CHECK(classify_definiteness(kW1) == Definiteness::indefinite);
  CHECK(classify_definiteness(MatQ{{0, 0}, {0, 0}}) ==
        Definiteness::positive_semidefinite);

  // W1 is indefinite (eigenvalues 3, -1); W2 is positive definite.
  const Graph g = four_node_graph();
  CHECK(g.indefinite_edge_indices().size() == 2);
}

TEST_CASE("union graphs") {
  const Graph a(3, 2, {{0, 1, EdgeSign::positive, kW1}}, {0});
  const Graph b(3, 2, {{0, 2, EdgeSign::positive, kW1}}, {0});
  const Graph empty(3, 2, {}, {0});

  SUBCASE("union with the edgeless graph is the graph") {
    const Graph graphs[] = {a, empty};
    const Graph u = union_graph(graphs);
    CHECK(u.edges().size() == 1);
    CHECK(u.adjacency_block(0, 1) == kW1);
  }
  SUBCASE("disjoint edge sets merge into the star") {
    const Graph graphs[] = {a, b};
    const Graph u = union_graph(graphs);
    CHECK(u.edges().size() == 2);
    CHECK(u.adjacency_block(0, 1) == kW1);
    CHECK(u.adjacency_block(0, 2) == kW1);
  }
  SUBCASE("coincident edges sum their weights") {
    const Graph graphs[] = {a, a};
    const Graph u = union_graph(graphs);
    REQUIRE(u.edges().size() == 1);
    CHECK(u.adjacency_block(0, 1) == kW1 + kW1);
  }
  SUBCASE("opposite signs cancel to no edge") {
    const Graph neg(3, 2, {{0, 1, EdgeSign::negative, kW1}}, {0});
    const Graph graphs[] = {a, neg};
    CHECK(union_graph(graphs).edges().empty());
  }
  SUBCASE("negative sums keep magnitude semantics") {
    const Graph neg(3, 2, {{0, 1, EdgeSign::negative, kW1}}, {0});
    const Graph graphs[] = {neg, neg};
    const Graph u = union_graph(graphs);
    REQUIRE(u.edges().size() == 1);
    CHECK(u.adjacency_block(0, 1) == -(kW1 + kW1));
    CHECK(u.weight_magnitude(0, 1) == kW1 + kW1);
  }
  SUBCASE("mismatched members are rejected") {
    const Graph other(4, 2, {{0, 1, EdgeSign::positive, kW1}}, {0});
    const Graph graphs[] = {a, other};
    CHECK_THROWS_AS(union_graph(graphs), std::invalid_argument);
  }
}
