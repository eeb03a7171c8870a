#include <cmath>

#include <gtest/gtest.h>

#include "gsparse/error.hpp"
#include "gsparse/losses.hpp"
#include "test_util.hpp"

using namespace gsparse;
using namespace gsparse::testing;

TEST(CrossEntropy, ClosedForms) {
  const std::vector<int> labels{0, 1, 1, 0};
  const std::vector<NodeId> rows{0, 1, 2, 3};
  Matrix perfect(4, 2);
  perfect << 1, 0, 0, 1, 0, 1, 1, 0;
  EXPECT_NEAR(cross_entropy(perfect, labels, rows), 0.0, 1e-15);
  EXPECT_NEAR(cross_entropy(Matrix::Constant(4, 2, 0.5), labels, rows), std::log(2.0), 1e-15);
  Matrix quarter = Matrix::Constant(4, 4, 0.25);
  EXPECT_NEAR(cross_entropy(quarter, labels, rows), std::log(4.0), 1e-15);
  EXPECT_NEAR(cross_entropy(quarter, labels, rows), 1.3863, 1e-4);
  EXPECT_THROW(cross_entropy(quarter, labels, std::vector<NodeId>{}), Error);
}

TEST(Assortativity, ClosedForms) {
  const std::vector<int> labels{0, 0, 1};
  const std::vector<char> train{1, 1, 0};
  const EdgeList edges{{0, 1}, {1, 2}};
  EXPECT_NEAR(assortativity_loss(std::vector<double>{0.5, 0.9}, edges, labels, train), std::log(2.0), 1e-12);
  EXPECT_NEAR(assortativity_loss(std::vector<double>{1 - 1e-12, 0.3}, edges, labels, train), 0.0, 1e-9);
  const std::vector<char> none{1, 0, 0};
  EXPECT_EQ(assortativity_loss(std::vector<double>{0.5, 0.5}, edges, labels, none), 0.0);
}

TEST(Assortativity, FullFormPenalizesHeterophilousEdges) {
  const std::vector<int> labels{0, 1};
  const std::vector<char> train{1, 1};
  const EdgeList edges{{0, 1}};
  EXPECT_NEAR(assortativity_loss(std::vector<double>{0.8}, edges, labels, train), -std::log(0.2), 1e-12);
  EXPECT_EQ(assortativity_loss(std::vector<double>{0.8}, edges, labels, train, {true, Reduction::mean}), 0.0);
}

TEST(Assortativity, MonotoneInHomophilousWeightProperty) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(12, 25, 2, 50 + c);
    std::vector<char> train(g.num_nodes(), 1);
    EdgeList edges;
    std::vector<double> w;
    for (const Edge& e : g.edges()) {
      edges.emplace_back(e.u, e.v);
      w.push_back(u(rng));
    }
    std::size_t target = edges.size();
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (g.label(edges[i].first) == g.label(edges[i].second)) target = i;
    if (target == edges.size()) continue;
    double prev = assortativity_loss(w, edges, g.labels(), train);
    for (double x = w[target] + 0.01; x < 1.0; x += 0.05) {
      w[target] = x;
      const double cur = assortativity_loss(w, edges, g.labels(), train);
      ASSERT_LT(cur, prev);
      prev = cur;
    }
  }
}

TEST(Consistency, ClosedForms) {
  Matrix h(3, 2);
  h << 1, 0, 0, 1, 0.8, 0.6;
  const EdgeList edges{{0, 1}};
  EXPECT_NEAR(consistency_loss(std::vector<double>{1.0}, h, edges), 1.0, 1e-15);
  EXPECT_NEAR(consistency_loss(std::vector<double>{0.0}, h, edges), 0.0, 1e-15);
  // cos(h0, h2) = 0.8
  EXPECT_NEAR(consistency_loss(std::vector<double>{0.3}, h, EdgeList{{0, 2}}), 0.5, 1e-12);
  EXPECT_NEAR(consistency_loss(std::vector<double>{0.3, 0.3}, h, EdgeList{{0, 2}, {0, 2}}, Reduction::sum), 1.0,
              1e-12);
}

TEST(TotalLoss, Weighted) {
  EXPECT_NEAR(total_loss(1.0, 2.0, 4.0, {1.0, 1.0, 0.5}).total, 5.0, 1e-12);
  EXPECT_EQ(total_loss(0.7, 2.0, 4.0, {1.0, 0.0, 0.0}).total, 0.7);
  EXPECT_EQ(total_loss(0.0, 0.0, 0.0, {}).total, 0.0);
}

TEST(Losses, NonNegativeFiniteProperty) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd;
  for (int c = 0; c < kPropertyCases; ++c) {
    const Graph g = random_graph(15, 30, 3, 80 + c);
    Matrix probs(15, 3);
    for (Eigen::Index i = 0; i < probs.size(); ++i) probs.data()[i] = c % 10 == 0 ? 0.0 : u(rng);
    probs.col(0).array() += 1e-300;
    for (Eigen::Index r = 0; r < probs.rows(); ++r) probs.row(r) /= probs.row(r).sum();
    std::vector<NodeId> rows{0, 3, 7};
    std::vector<char> train(15, 1);
    EdgeList edges;
    std::vector<double> w;
    for (const Edge& e : g.edges()) {
      edges.emplace_back(e.u, e.v);
      w.push_back(c % 7 == 0 ? std::round(u(rng)) : u(rng));
    }
    Matrix h(15, 4);
    for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = c % 5 == 0 ? 0.0 : nd(rng);
    const double ce = cross_entropy(probs, g.labels(), rows);
    const double as = assortativity_loss(w, edges, g.labels(), train);
    const double co = consistency_loss(w, h, edges);
    for (double x : {ce, as, co}) {
      ASSERT_TRUE(std::isfinite(x));
      ASSERT_GE(x, 0.0);
    }
  }
}

TEST(LossWeights, Validation) {
  EXPECT_THROW((LossWeights{-1.0, 1.0, 0.5}.validate()), Error);
  EXPECT_NO_THROW(LossWeights{}.validate());
}
