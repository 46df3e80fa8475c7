#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "netloc/error.hpp"
#include "netloc/graph.hpp"
#include "support/oracles.hpp"

namespace netloc {
namespace {

template <typename Fn>
ErrorKind error_kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected netloc::Error";
  return ErrorKind::IoError;
}

std::size_t degree_sum(const Graph& g) {
  std::size_t s = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) s += g.degree(v);
  return s;
}

void expect_simple(const Graph& g) {
  for (const Edge& e : g.edges()) {
    EXPECT_LT(e.u, e.v);
    EXPECT_LT(e.v, g.node_count());
  }
  EXPECT_TRUE(std::adjacent_find(g.edges().begin(), g.edges().end()) == g.edges().end());
  EXPECT_EQ(degree_sum(g), 2 * g.edge_count());
}

TEST(Graph, RejectsInvalidConstruction) {
  EXPECT_EQ(error_kind_of([] { Graph(0, {}); }), ErrorKind::InvalidSize);
  EXPECT_EQ(error_kind_of([] { Graph(3, {{1, 1}}); }), ErrorKind::InvalidGraph);
  EXPECT_EQ(error_kind_of([] { Graph(3, {{0, 1}, {1, 0}}); }), ErrorKind::InvalidGraph);
  EXPECT_EQ(error_kind_of([] { Graph(3, {{0, 3}}); }), ErrorKind::InvalidGraph);
}

TEST(Graph, CanonicalizesEdges) {
  const Graph g(3, {{2, 1}, {1, 0}});
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges()[1], (Edge{1, 2}));
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(Generators, CycleTriangle) {
  const Graph g = make_cycle(3);
  const std::vector<Edge> expected{{0, 1}, {0, 2}, {1, 2}};
  EXPECT_TRUE(std::equal(g.edges().begin(), g.edges().end(), expected.begin(), expected.end()));
}

TEST(Generators, CycleIsTwoRegular) {
  const Graph g = make_cycle(4);
  EXPECT_EQ(g.edge_count(), 4u);
  for (NodeId v = 0; v < 4; ++v) EXPECT_EQ(g.degree(v), 2u);
}

TEST(Generators, LargeCycleHasLambdaTwo) {
  const Graph big = make_cycle(200);
  EXPECT_TRUE(is_connected(big));
  EXPECT_EQ(big.edge_count(), 200u);
  // Regularity gives lambda1 = 2 for every n; confirm on a size the dense oracle handles.
  const auto eig = testing::jacobi_eigen(testing::adjacency_matrix(make_cycle(30)));
  EXPECT_NEAR(eig.values.front(), 2.0, 1e-10);
}

TEST(Generators, SizeMinimums) {
  EXPECT_EQ(error_kind_of([] { make_cycle(2); }), ErrorKind::InvalidSize);
  EXPECT_EQ(error_kind_of([] { make_path(1); }), ErrorKind::InvalidSize);
  EXPECT_EQ(error_kind_of([] { make_star(1); }), ErrorKind::InvalidSize);
  EXPECT_EQ(error_kind_of([] { make_wheel(3); }), ErrorKind::InvalidSize);
}

TEST(Generators, StarWheelPath) {
  const Graph star = make_star(5);
  EXPECT_EQ(star.degree(0), 4u);
  for (NodeId v = 1; v < 5; ++v) EXPECT_EQ(star.degree(v), 1u);
  EXPECT_EQ(star.edge_count(), 4u);

  const Graph wheel = make_wheel(5);
  EXPECT_EQ(wheel.degree(0), 4u);
  for (NodeId v = 1; v < 5; ++v) EXPECT_EQ(wheel.degree(v), 3u);
  EXPECT_EQ(wheel.edge_count(), 8u);

  const Graph path = make_path(2);
  ASSERT_EQ(path.edge_count(), 1u);
  EXPECT_EQ(path.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(make_path(7).edge_count(), 6u);
}

TEST(Generators, DeterministicFamiliesAreConnectedAndSimple) {
  for (std::size_t n = 4; n <= 40; ++n) {
    for (const Graph& g : {make_cycle(n), make_path(n), make_star(n), make_wheel(n)}) {
      EXPECT_TRUE(is_connected(g));
      expect_simple(g);
    }
  }
}

TEST(Generators, ErProbabilityOneIsComplete) {
  const Graph g = make_er(9, 1.0, 3);
  EXPECT_EQ(g, make_complete(9));
}

TEST(Generators, ErRejectsBadProbability) {
  EXPECT_EQ(error_kind_of([] { make_er(10, 0.0, 1); }), ErrorKind::InvalidProbability);
  EXPECT_EQ(error_kind_of([] { make_er(10, 1.5, 1); }), ErrorKind::InvalidProbability);
  EXPECT_EQ(error_kind_of([] { make_er(10, -0.1, 1); }), ErrorKind::InvalidProbability);
}

TEST(Generators, ErMeanEdgeCountMatchesBinomial) {
  const std::size_t n = 1000;
  const double p = 0.01;
  const double pairs = n * (n - 1) / 2.0;
  double total = 0.0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) total += static_cast<double>(make_er(n, p, s).edge_count());
  const double mean = total / seeds;
  const double sigma_of_mean = std::sqrt(pairs * p * (1 - p) / seeds);
  EXPECT_NEAR(mean, 4995.0, 3 * sigma_of_mean);
}

TEST(Generators, ErIsDeterministic) {
  EXPECT_EQ(to_edge_list(make_er(60, 0.1, 42)), to_edge_list(make_er(60, 0.1, 42)));
  EXPECT_NE(to_edge_list(make_er(60, 0.1, 42)), to_edge_list(make_er(60, 0.1, 43)));
}

TEST(Generators, ScaleFreeSeedStar) {
  EXPECT_EQ(make_scale_free(4, 3, 9), make_star(4));
}

TEST(Generators, ScaleFreeEdgeCount) {
  // A 3-node seed star (2 edges) plus 2 edges for each of the 97 added nodes.
  const Graph g = make_scale_free(100, 2, 5);
  EXPECT_EQ(g.edge_count(), 196u);
  EXPECT_TRUE(is_connected(g));
  expect_simple(g);
}

TEST(Generators, ScaleFreeRejectsLargeM) {
  EXPECT_EQ(error_kind_of([] { make_scale_free(5, 5, 1); }), ErrorKind::InvalidParams);
  EXPECT_EQ(error_kind_of([] { make_scale_free(5, 0, 1); }), ErrorKind::InvalidParams);
}

TEST(Generators, ScaleFreeTailHeavierThanEr) {
  const std::size_t n = 500;
  const std::size_t m = 2;
  double ratio = 0.0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const Graph sf = make_scale_free(n, m, s);
    const double mean_degree = 2.0 * sf.edge_count() / n;
    const Graph er = make_er(n, mean_degree / (n - 1), 1000 + s);
    std::size_t sf_max = 0, er_max = 0;
    for (NodeId v = 0; v < n; ++v) {
      sf_max = std::max(sf_max, sf.degree(v));
      er_max = std::max(er_max, er.degree(v));
    }
    ratio += static_cast<double>(sf_max) / static_cast<double>(er_max);
  }
  EXPECT_GT(ratio / seeds, 2.0);
}

TEST(Connectivity, Examples) {
  EXPECT_TRUE(is_connected(make_star(5)));
  EXPECT_FALSE(is_connected(Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}})));
  EXPECT_TRUE(is_connected(make_er(50, 0.9, 7)));
  EXPECT_TRUE(is_connected(Graph(1, {})));
}

TEST(Families, ParseRoundTrip) {
  for (auto tag : {FamilyTag::Cycle, FamilyTag::Path, FamilyTag::Star, FamilyTag::Wheel,
                   FamilyTag::ER, FamilyTag::ScaleFree}) {
    EXPECT_EQ(parse_family(family_name(tag)), tag);
  }
  EXPECT_EQ(error_kind_of([] { parse_family("lattice"); }), ErrorKind::InvalidParams);
}

TEST(Families, GenerateDispatches) {
  EXPECT_EQ(generate({FamilyTag::Wheel}, 9, 0), make_wheel(9));
  const GraphFamily er{FamilyTag::ER, 0.0, 8.0, 2};
  EXPECT_EQ(generate(er, 80, 11), make_er(80, 8.0 / 80, 11));
  const GraphFamily sf{FamilyTag::ScaleFree, 0.0, 8.0, 3};
  EXPECT_EQ(generate(sf, 50, 4), make_scale_free(50, 3, 4));
}

TEST(EdgeList, RoundTrip) {
  const Graph g = make_er(30, 0.2, 8);
  std::istringstream in(to_edge_list(g));
  EXPECT_EQ(read_edge_list(in), g);
  EXPECT_EQ(to_edge_list(make_path(3)), "3 2\n0 1\n1 2\n");
}

TEST(EdgeList, ParseErrorsCarryLineNumbers) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_edge_list(in);
  };
  EXPECT_EQ(error_kind_of([&] { parse("3 2\n0 1\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { parse("3 1\n0 x\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(error_kind_of([&] { parse("3 1\n0 1 5\n"); }), ErrorKind::ParseError);
  try {
    parse("3 2\n0 1\nbad\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos) << e.what();
  }
}

TEST(Graph, RelabelPreservesStructure) {
  const Graph g = make_wheel(6);
  const std::vector<NodeId> perm{5, 3, 1, 0, 2, 4};
  const Graph h = g.relabeled(perm);
  EXPECT_EQ(h.edge_count(), g.edge_count());
  EXPECT_EQ(h.degree(5), 5u);
  for (const Edge& e : g.edges()) EXPECT_TRUE(h.has_edge(perm[e.u], perm[e.v]));
}

}  // namespace
}  // namespace netloc
