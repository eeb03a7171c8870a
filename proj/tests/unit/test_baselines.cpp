#include <numeric>

#include <gtest/gtest.h>

#include "gsparse/baselines.hpp"
#include "gsparse/error.hpp"
#include "gsparse/metrics.hpp"
#include "gsparse/prior.hpp"
#include "gsparse/sampler.hpp"
#include "test_util.hpp"

using namespace gsparse;
using namespace gsparse::testing;

namespace {

std::size_t components(const Graph& g) {
  std::vector<int> seen(g.num_nodes(), 0);
  std::size_t count = 0;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::vector<NodeId> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u))
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
  }
  return count;
}

} // namespace

TEST(Random, Uniform) {
  const Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, std::vector<int>(5, 0));
  for (double x : random_distribution(g)) EXPECT_EQ(x, 0.25);
}

TEST(Random, SampleFrequenciesUniform) {
  const Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, std::vector<int>(5, 0));
  const auto p = random_distribution(g);
  Rng rng(3);
  std::vector<double> counts(4, 0.0);
  const int trials = 100000;
  for (int t = 0; t < trials; ++t)
    for (EdgeId e : sample_multinomial_k(p, 2, rng)) ++counts[e];
  // Each edge lands in a 2-of-4 draw with probability 1/2.
  const double sd = std::sqrt(trials * 0.25);
  for (double c : counts) EXPECT_LE(std::abs(c - trials * 0.5), 3 * sd);
}

TEST(DegreeWeighted, MatchesPrior) {
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(15, 30, 2, 10 + c);
    ASSERT_EQ(degree_weighted_distribution(g), compute_prior(g));
  }
  const auto star = degree_weighted_distribution(make_graph(4, {{0, 1}, {0, 2}, {0, 3}}, {0, 0, 0, 0}));
  for (double x : star) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
  const auto path = degree_weighted_distribution(make_graph(3, {{0, 1}, {1, 2}}, {0, 0, 0}));
  EXPECT_NEAR(path[0], 0.5, 1e-15);
}

TEST(EffectiveResistance, TreesAreOne) {
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_tree(2 + c % 40, 700 + c);
    for (double r : effective_resistances(g)) ASSERT_NEAR(r, 1.0, 1e-9);
    for (double p : effective_resistance_distribution(g)) ASSERT_NEAR(p, 1.0 / g.num_edges(), 1e-9);
  }
}

TEST(EffectiveResistance, Cycles) {
  for (std::size_t n = 3; n <= 20; ++n) {
    const auto r = effective_resistances(cycle_graph(n));
    for (double x : r) ASSERT_NEAR(x, static_cast<double>(n - 1) / static_cast<double>(n), 1e-9);
  }
  for (double x : effective_resistances(cycle_graph(4))) EXPECT_NEAR(x, 0.75, 1e-12);
}

TEST(EffectiveResistance, FosterProperty) {
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(5 + c % 40, 4 + 2 * c, 2, 1000 + c);
    const auto r = effective_resistances(g);
    const double total = std::accumulate(r.begin(), r.end(), 0.0);
    ASSERT_NEAR(total, static_cast<double>(g.num_nodes() - components(g)), 1e-8);
  }
}

TEST(EffectiveResistance, CapEnforced) {
  const Graph g = cycle_graph(30);
  EXPECT_THROW(effective_resistances(g, 10), Error);
}

TEST(FixedDistributions, ValidProperty) {
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(10 + c % 20, 12 + c, 2, 1500 + c);
    for (FixedKind k : {FixedKind::random, FixedKind::degree_weighted, FixedKind::effective_resistance}) {
      const auto p = fixed_distribution(g, k);
      ASSERT_EQ(p.size(), g.num_edges());
      ASSERT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
      for (double x : p) ASSERT_GE(x, 0.0);
    }
  }
}

TEST(Metrics, HandComputed) {
  const std::vector<int> truth{0, 0, 1, 1}, pred{0, 1, 1, 1};
  const std::vector<NodeId> all{0, 1, 2, 3};
  EXPECT_NEAR(micro_f1(pred, truth, all), 0.75, 1e-15);
  EXPECT_NEAR(macro_f1(pred, truth, all), (2.0 / 3.0 + 0.8) / 2.0, 1e-15);
  EXPECT_EQ(micro_f1(truth, truth, all), 1.0);
  EXPECT_EQ(macro_f1(truth, truth, all), 1.0);
  EXPECT_EQ(micro_f1(std::vector<int>{1, 1, 0, 0}, truth, all), 0.0);
  EXPECT_THROW(micro_f1(pred, truth, std::vector<NodeId>{}), Error);
}

TEST(Metrics, MicroEqualsAccuracyProperty) {
  Rng rng(4);
  for (int c = 0; c < kPropertyCases; ++c) {
    const int classes = 2 + c % 5;
    std::uniform_int_distribution<int> lab(0, classes - 1);
    std::vector<int> truth(50), pred(50);
    for (int i = 0; i < 50; ++i) {
      truth[i] = lab(rng);
      pred[i] = lab(rng);
    }
    std::vector<NodeId> mask;
    for (NodeId i = 0; i < 50; i += 1 + c % 3) mask.push_back(i);
    double hits = 0;
    for (NodeId i : mask) hits += truth[i] == pred[i];
    ASSERT_DOUBLE_EQ(micro_f1(pred, truth, mask), hits / static_cast<double>(mask.size()));
    const double macro = macro_f1(pred, truth, mask);
    ASSERT_GE(macro, 0.0);
    ASSERT_LE(macro, 1.0);
  }
}
