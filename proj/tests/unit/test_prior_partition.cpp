#include <numeric>

#include <gtest/gtest.h>

#include "gsparse/error.hpp"
#include "gsparse/partition.hpp"
#include "gsparse/prior.hpp"
#include "test_util.hpp"

using namespace gsparse;
using namespace gsparse::testing;

namespace {

void audit(const Graph& g, const Partition& p) {
  ASSERT_EQ(p.node_part.size(), g.num_nodes());
  std::vector<int> core_seen(g.num_nodes(), 0);
  std::vector<int> edge_seen(g.num_edges(), 0);
  for (std::size_t pi = 0; pi < p.parts.size(); ++pi) {
    const Part& part = p.parts[pi];
    ASSERT_FALSE(part.nodes.empty());
    for (std::size_t i = 0; i < part.num_core; ++i) {
      ++core_seen[part.nodes[i]];
      ASSERT_EQ(p.node_part[part.nodes[i]], pi);
    }
    std::size_t cut = 0;
    for (EdgeId e : part.edges) {
      ++edge_seen[e];
      const Edge& ed = g.edge(e);
      const bool u_in = p.node_part[ed.u] == pi, v_in = p.node_part[ed.v] == pi;
      ASSERT_TRUE(u_in || v_in);
      if (!(u_in && v_in)) {
        ++cut;
        ASSERT_TRUE(u_in) << "cut edge owned by the higher endpoint's part";
      }
    }
    ASSERT_EQ(cut, part.cut_edges);
    ASSERT_TRUE(std::is_sorted(part.edges.begin(), part.edges.end()));
  }
  for (int c : core_seen) ASSERT_EQ(c, 1);
  for (int c : edge_seen) ASSERT_EQ(c, 1);
}

} // namespace

TEST(Prior, SingleEdge) {
  const Graph g = make_graph(2, {{0, 1}}, {0, 0});
  EXPECT_EQ(compute_prior(g), std::vector<double>{1.0});
}

TEST(Prior, Path) {
  const auto p = compute_prior(make_graph(3, {{0, 1}, {1, 2}}, {0, 0, 0}));
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
}

TEST(Prior, Star) {
  const auto p = compute_prior(make_graph(4, {{0, 1}, {0, 2}, {0, 3}}, {0, 0, 0, 0}));
  for (double x : p) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Prior, NormalizationAndOrderingProperty) {
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(10 + c % 30, 15 + 2 * c, 2, 2000 + c);
    const auto p = compute_prior(g);
    ASSERT_EQ(p.size(), g.num_edges());
    ASSERT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    // Oracle: 1/d_u + 1/d_v up to a common factor.
    const double scale = p[0] / (1.0 / g.degree(g.edge(0).u) + 1.0 / g.degree(g.edge(0).v));
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      ASSERT_NEAR(p[e], scale * (1.0 / g.degree(ed.u) + 1.0 / g.degree(ed.v)), 1e-12);
    }
    for (EdgeId a = 0; a < g.num_edges(); ++a) {
      for (EdgeId b = 0; b < g.num_edges(); ++b) {
        const auto du = g.degree(g.edge(a).u), dv = g.degree(g.edge(a).v);
        const auto eu = g.degree(g.edge(b).u), ev = g.degree(g.edge(b).v);
        const bool dominated = (du <= eu && dv <= ev && (du < eu || dv < ev)) ||
                               (du <= ev && dv <= eu && (du < ev || dv < eu));
        if (dominated) ASSERT_GT(p[a], p[b]);
      }
    }
  }
}

TEST(Prior, NormalizedRejectsZeroMass) {
  EXPECT_THROW(normalized({0.0, 0.0}), Error);
  const auto n = normalized({1.0, 3.0});
  EXPECT_DOUBLE_EQ(n[1], 0.75);
}

TEST(Partition, UnderCapIsOnePart) {
  const Graph g = random_graph(30, 60, 2, 3);
  const Partition p = partition_graph(g, 1000, 0);
  ASSERT_EQ(p.parts.size(), 1u);
  EXPECT_EQ(p.parts[0].edges.size(), g.num_edges());
  EXPECT_EQ(p.cut_edges(), 0u);
  audit(g, p);
}

TEST(Partition, TwoCliques) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId base : {0u, 5u})
    for (NodeId a = 0; a < 5; ++a)
      for (NodeId b = a + 1; b < 5; ++b) edges.emplace_back(base + a, base + b);
  const Graph g = make_graph(10, edges, std::vector<int>(10, 0));
  const Partition p = partition_graph(g, 10, 0);
  ASSERT_EQ(p.parts.size(), 2u);
  EXPECT_EQ(p.cut_edges(), 0u);
  audit(g, p);
}

TEST(Partition, AuditProperty) {
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(200, 300 + 5 * c, 2, 4000 + c);
    const Partition p = partition_graph(g, 100, static_cast<std::uint64_t>(c));
    audit(g, p);
    ASSERT_GE(p.parts.size(), 1u);
  }
}

TEST(Partition, Deterministic) {
  const Graph g = random_graph(200, 600, 2, 9);
  const Partition a = partition_graph(g, 100, 4), b = partition_graph(g, 100, 4);
  EXPECT_EQ(a.node_part, b.node_part);
}
