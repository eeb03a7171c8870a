#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "gsparse/error.hpp"
#include "gsparse/generators.hpp"
#include "gsparse/graph.hpp"
#include "gsparse/graph_io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace gsparse;
using namespace gsparse::testing;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("gsparse_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Independent enumeration over canonical edges for the homophily oracles.
double oracle_edge_h(const Graph& g) {
  double same = 0;
  for (const Edge& e : g.edges()) same += g.label(e.u) == g.label(e.v);
  return g.num_edges() ? same / static_cast<double>(g.num_edges()) : 0.0;
}

} // namespace

TEST(Graph, PathConstruction) {
  const Graph g = make_graph(3, {{0, 1}, {1, 2}}, {0, 0, 1});
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.degree(2), 1u);
}

TEST(Graph, ReversedDuplicateCollapses) {
  const Graph g = make_graph(2, {{0, 1}, {1, 0}}, {0, 1});
  ASSERT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.edge(0), (Edge{0, 1}));
}

TEST(Graph, SelfLoopRejected) {
  EXPECT_THROW(make_graph(6, {{5, 5}}, std::vector<int>(6, 0)), Error);
}

TEST(Graph, OutOfRangeRejected) { EXPECT_THROW(make_graph(3, {{0, 3}}, {0, 0, 0}), Error); }

TEST(Graph, CsrConsistencyProperty) {
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(5 + c % 40, 3 * (5 + c % 40), 3, 100 + c);
    std::vector<std::size_t> incident(g.num_nodes(), 0);
    for (const Edge& e : g.edges()) {
      ASSERT_LT(e.u, e.v);
      ++incident[e.u];
      ++incident[e.v];
    }
    for (std::size_t i = 1; i < g.num_edges(); ++i) {
      const Edge& a = g.edge(static_cast<EdgeId>(i - 1));
      const Edge& b = g.edge(static_cast<EdgeId>(i));
      ASSERT_TRUE(a.u < b.u || (a.u == b.u && a.v < b.v));
    }
    ASSERT_EQ(g.csr_targets().size(), 2 * g.num_edges());
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      ASSERT_EQ(g.degree(u), incident[u]);
      const auto nb = g.neighbors(u);
      const auto ids = g.incident_edges(u);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const Edge& e = g.edge(ids[k]);
        ASSERT_TRUE((e.u == u && e.v == nb[k]) || (e.v == u && e.u == nb[k]));
      }
    }
  }
}

TEST(Homophily, TriangleAAB) {
  const Graph g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}}, {0, 0, 1});
  EXPECT_NEAR(node_homophily(g), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(edge_homophily(g), 1.0 / 3.0, 1e-12);
}

TEST(Homophily, AllSameNeighborhoods) {
  const Graph g = make_graph(4, {{0, 1}, {2, 3}}, {0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(node_homophily(g), 1.0);
  EXPECT_DOUBLE_EQ(edge_homophily(g), 1.0);
}

TEST(Homophily, SingleClass) {
  const Graph g = make_graph(3, {{0, 1}, {1, 2}}, {0, 0, 0});
  EXPECT_DOUBLE_EQ(edge_homophily(g), 1.0);
  EXPECT_DOUBLE_EQ(adjusted_homophily(g), 0.0);
}

TEST(Homophily, IsolatedNodesExcludedFromNodeMean) {
  const Graph g = make_graph(4, {{0, 1}}, {0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(node_homophily(g), 1.0);
}

TEST(Homophily, FourCycleAdjusted) {
  const Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {0, 1, 0, 1});
  // H_e = 0, D_A = D_B = 4, 2|E| = 8: (0 - 32/64) / (1 - 32/64).
  const double chance = (4.0 * 4.0 + 4.0 * 4.0) / 64.0;
  EXPECT_NEAR(adjusted_homophily(g), (0.0 - chance) / (1.0 - chance), 1e-12);
  EXPECT_NEAR(adjusted_homophily(g), -1.0, 1e-12);
}

TEST(Homophily, HeterophilyThreshold) {
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(30, 60, 2 + c % 3, 500 + c);
    const HomophilyReport r = homophily_report(g);
    ASSERT_EQ(r.is_heterophilic, r.adjusted_homophily <= 0.5);
  }
}

TEST(Homophily, RangesProperty) {
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(10 + c % 30, 20 + c, 1 + c % 4, 900 + c);
    const HomophilyReport r = homophily_report(g);
    ASSERT_GE(r.node_homophily, 0.0);
    ASSERT_LE(r.node_homophily, 1.0);
    ASSERT_NEAR(r.edge_homophily, oracle_edge_h(g), 1e-12);
    ASSERT_GE(r.adjusted_homophily, -1.0 - 1e-12);
    ASSERT_LE(r.adjusted_homophily, 1.0 + 1e-12);
  }
}

TEST(Homophily, SubgraphSubsets) {
  const Graph g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}}, {0, 0, 1});
  const std::vector<EdgeId> all{0, 1, 2};
  EXPECT_DOUBLE_EQ(subgraph_edge_homophily(g, all), edge_homophily(g));
  // Canonical order: (0,1) intra, (0,2) cross, (1,2) cross.
  EXPECT_DOUBLE_EQ(subgraph_edge_homophily(g, std::vector<EdgeId>{0}), 1.0);
  double mean = 0;
  for (EdgeId drop = 0; drop < 3; ++drop) {
    std::vector<EdgeId> keep;
    for (EdgeId e = 0; e < 3; ++e)
      if (e != drop) keep.push_back(e);
    mean += subgraph_edge_homophily(g, keep) / 3.0;
  }
  EXPECT_NEAR(mean, 1.0 / 3.0, 1e-12);
}

TEST(Generators, HomophilyTargetOneIsPure) {
  for (int c = 0; c < kPropertyCases; ++c) {
    HomophilyGraphOptions o;
    o.degree = 4;
    o.target_h = 1.0;
    o.seed = static_cast<std::uint64_t>(c);
    const Graph g = gen_homophily_controlled(balanced_labels(60, 3), o);
    ASSERT_EQ(edge_homophily(g), 1.0);
  }
}

TEST(Generators, HomophilyTargetZeroHasNoForcedEdges) {
  HomophilyGraphOptions o;
  o.degree = 5;
  o.target_h = 0.0;
  const Graph g = gen_homophily_controlled(balanced_labels(400, 4), o);
  // Only chance hits remain: about 1/4 of the edges.
  EXPECT_NEAR(edge_homophily(g), 0.25, 0.05);
}

TEST(Generators, HomophilyPointFour) {
  HomophilyGraphOptions o;
  o.degree = 10;
  o.target_h = 0.4;
  const Graph g = gen_homophily_controlled(balanced_labels(1000, 2), o);
  EXPECT_EQ(g.num_edges(), 10000u);
  EXPECT_NEAR(node_homophily(g), 0.7, 0.1);
}

TEST(Generators, MoonStatistics) {
  const Graph g = gen_moon_graph({});
  EXPECT_EQ(g.num_nodes(), 150u);
  EXPECT_NEAR(static_cast<double>(g.num_edges()), 870.0, 60.0);
  EXPECT_NEAR(edge_homophily(g), 0.32, 0.05);
  EXPECT_NEAR(node_homophily(g), 0.2, 0.15);
  std::size_t zero = 0;
  for (int y : g.labels()) zero += y == 0;
  EXPECT_EQ(zero, 75u);
}

TEST(Generators, MoonWithoutBridges) {
  MoonGraphOptions o;
  o.bridge_fraction = 0.0;
  const Graph g = gen_moon_graph(o);
  EXPECT_EQ(edge_homophily(g), 1.0);
  for (const Edge& e : g.edges()) ASSERT_EQ(e.u < 75, e.v < 75);
}

TEST(Generators, SplitCounts) {
  const auto s = random_split(101, {0.2, 0.4}, 3);
  std::size_t tr = 0, va = 0;
  for (Split x : s) {
    tr += x == Split::train;
    va += x == Split::val;
  }
  EXPECT_EQ(tr, 20u);
  EXPECT_EQ(va, 40u);
}

TEST(GraphIo, RoundTripProperty) {
  const fs::path dir = scratch("roundtrip");
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(4 + c % 25, 10 + c, 1 + c % 4, 1300 + c);
    save_graph(g, dir);
    const Graph h = load_graph(dir);
    ASSERT_EQ(h.num_nodes(), g.num_nodes());
    ASSERT_EQ(h.num_classes(), g.num_classes());
    ASSERT_TRUE(std::equal(g.edges().begin(), g.edges().end(), h.edges().begin(), h.edges().end()));
    ASSERT_TRUE(std::equal(g.labels().begin(), g.labels().end(), h.labels().begin(), h.labels().end()));
    ASSERT_TRUE(std::equal(g.split().begin(), g.split().end(), h.split().begin(), h.split().end()));
    ASSERT_LE((g.features() - h.features()).cwiseAbs().maxCoeff(), 1e-12);
  }
  fs::remove_all(dir);
}

TEST(GraphIo, MissingDirectoryNamesPath) {
  const fs::path dir = fs::temp_directory_path() / "gsparse_test_no_such_dir";
  fs::remove_all(dir);
  try {
    load_graph(dir);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(dir.string()), std::string::npos);
  }
}

TEST(GraphIo, EdgeCsvWeights) {
  const fs::path dir = scratch("edgecsv");
  {
    std::ofstream os(dir / "e.csv");
    os << "0,1\n1,2,0.25\n";
  }
  const auto rows = read_edge_csv(dir / "e.csv", 3);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].weight, 1.0);
  EXPECT_EQ(rows[1].weight, 0.25);
  EXPECT_THROW(read_edge_csv(dir / "e.csv", 2), Error);
  fs::remove_all(dir);
}
