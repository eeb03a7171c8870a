#include <numeric>

#include <gtest/gtest.h>

#include "gsparse/edge_encoder.hpp"
#include "gsparse/error.hpp"
#include "gsparse/prior.hpp"
#include "gsparse/sampler.hpp"
#include "test_util.hpp"

using namespace gsparse;
using namespace gsparse::testing;

namespace {

Matrix dense_norm_adj(const Graph& g, std::span<const EdgeId> subset) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Matrix a = Matrix::Identity(n, n);
  for (EdgeId e : subset) {
    a(g.edge(e).u, g.edge(e).v) = 1.0;
    a(g.edge(e).v, g.edge(e).u) = 1.0;
  }
  const Eigen::VectorXd d = a.rowwise().sum().cwiseSqrt().cwiseInverse();
  return d.asDiagonal() * a * d.asDiagonal();
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Per-edge straight-line evaluation of the scorer.
std::vector<double> oracle_scores(const EdgeEncoderParams& p, const Matrix& h, const Graph& g) {
  std::vector<double> out;
  for (const Edge& e : g.edges()) {
    const Eigen::RowVectorXd hu = h.row(e.u), hv = h.row(e.v);
    Eigen::RowVectorXd z(2 * hu.size());
    z << hu - hv, hu.cwiseProduct(hv);
    Eigen::RowVectorXd hidden = z * p.mlp_w0 + p.mlp_b0;
    hidden = hidden.cwiseMax(0.0);
    out.push_back(sigmoid((hidden * p.mlp_w1)(0, 0) + p.mlp_b1(0, 0)));
  }
  return out;
}

} // namespace

TEST(Encoder, ParameterShapes) {
  Rng rng(1);
  const EdgeEncoderParams p = EdgeEncoderParams::glorot(5, 7, rng);
  EXPECT_EQ(p.enc_w0.rows(), 5);
  EXPECT_EQ(p.enc_w0.cols(), 7);
  EXPECT_EQ(p.enc_w1.rows(), 7);
  EXPECT_EQ(p.mlp_w0.rows(), 14);
  EXPECT_EQ(p.mlp_w0.cols(), 7);
  EXPECT_EQ(p.mlp_w1.rows(), 7);
  EXPECT_EQ(p.mlp_w1.cols(), 1);
}

TEST(Encoder, StructuralSampleSize) {
  EXPECT_EQ(edges_to_keep(20, 870), 174u);
  EXPECT_EQ(edges_to_keep(100, 870), 870u);
  const Graph g = random_graph(20, 40, 2, 3);
  Rng rng(2);
  const auto prior = compute_prior(g);
  EXPECT_EQ(sample_multinomial_k(prior, g.num_edges(), rng).size(), g.num_edges());
  Tape t;
  const auto v = bind(t, EdgeEncoderParams::glorot(g.feature_dim(), 4, rng), false);
  EXPECT_THROW(encode_structural_embedding(t, v, g, prior, 1.0, rng), Error);
}

TEST(Encoder, ZeroWeightsGiveZeroEmbeddingAndHalfScores) {
  const Graph g = random_graph(12, 20, 2, 4);
  Tape t;
  const auto v = bind(t, EdgeEncoderParams::zeros(g.feature_dim(), 6), false);
  std::vector<EdgeId> all(g.num_edges());
  std::iota(all.begin(), all.end(), 0);
  const Var h = encode_embedding(t, v, g, all);
  EXPECT_EQ(t.value(h).cwiseAbs().maxCoeff(), 0.0);
  const Matrix& s = t.value(score_edges(t, v, h, g));
  for (Eigen::Index i = 0; i < s.rows(); ++i) EXPECT_EQ(s(i, 0), 0.5);
}

TEST(Encoder, EqualEmbeddingsCancelDifferenceHalf) {
  const Graph g = make_graph(3, {{0, 1}, {1, 2}}, {0, 0, 0});
  Rng rng(5);
  EdgeEncoderParams p = EdgeEncoderParams::glorot(2, 3, rng);
  Matrix h = Matrix::Ones(3, 3);
  Tape t;
  const auto v = bind(t, p, false);
  const Matrix base = t.value(score_edges(t, v, t.constant(h), g));
  p.mlp_w0.topRows(3).setRandom();
  Tape t2;
  const auto v2 = bind(t2, p, false);
  const Matrix changed = t2.value(score_edges(t2, v2, t2.constant(h), g));
  EXPECT_EQ(base, changed);
}

TEST(Encoder, MatchesDenseOracle) {
  for (int c = 0; c < 10; ++c) {
    const Graph g = random_graph(6, 5, 2, 70 + c, 4);
    Rng rng(c);
    EdgeEncoderParams p = EdgeEncoderParams::glorot(4, 5, rng);
    p.mlp_b0.setRandom();
    p.mlp_b1.setRandom();
    const std::vector<EdgeId> structural{0, 2, 3};
    Tape t;
    const auto v = bind(t, p, false);
    const Var h = encode_embedding(t, v, g, structural);
    const Matrix a = dense_norm_adj(g, structural);
    const Matrix xw = g.features() * p.enc_w0;
    const Matrix expected = xw + a * (a * xw).cwiseMax(0.0) * p.enc_w1;
    ASSERT_LE((t.value(h) - expected).cwiseAbs().maxCoeff(), 1e-12);
    const Matrix& s = t.value(score_edges(t, v, h, g));
    const auto oracle = oracle_scores(p, expected, g);
    for (std::size_t e = 0; e < oracle.size(); ++e) ASSERT_NEAR(s(static_cast<Eigen::Index>(e), 0), oracle[e], 1e-12);
  }
}

// Edges are oriented u < v, so the difference half flips sign when a relabeling
// reverses an edge; embeddings are equivariant and scores are for edges whose
// orientation survives.
TEST(Encoder, RelabelingEquivariance) {
  std::size_t kept_orientation = 0;
  for (int c = 0; c < kPropertyCases; ++c) {
    Rng rng(300 + c);
    const std::size_t n = 8 + c % 10;
    const Graph g = random_graph(n, 2 * n, 2, 300 + c, 3);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const Edge& e : g.edges()) edges.emplace_back(perm[e.u], perm[e.v]);
    Matrix x(g.features().rows(), g.features().cols());
    for (NodeId u = 0; u < n; ++u) x.row(perm[u]) = g.features().row(u);
    const Graph h(n, edges, x, std::vector<int>(n, 0), std::vector<Split>(n, Split::train), 1);
    const EdgeEncoderParams p = EdgeEncoderParams::glorot(3, 4, rng);
    Tape t;
    const auto v = bind(t, p, false);
    std::vector<EdgeId> all_g(g.num_edges()), all_h(h.num_edges());
    std::iota(all_g.begin(), all_g.end(), 0);
    std::iota(all_h.begin(), all_h.end(), 0);
    const Var eg = encode_embedding(t, v, g, all_g), eh = encode_embedding(t, v, h, all_h);
    for (NodeId u = 0; u < n; ++u)
      ASSERT_LE((t.value(eg).row(u) - t.value(eh).row(perm[u])).cwiseAbs().maxCoeff(), 1e-12);
    const Matrix sg = t.value(score_edges(t, v, eg, g));
    const Matrix sh = t.value(score_edges(t, v, eh, h));
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const NodeId a = perm[g.edge(e).u], b = perm[g.edge(e).v];
      if (a > b) continue;
      ++kept_orientation;
      EdgeId f = 0;
      while (h.edge(f) != Edge{a, b}) ++f;
      ASSERT_NEAR(sg(e, 0), sh(f, 0), 1e-12);
    }
  }
  EXPECT_GT(kept_orientation, 0u);
}

TEST(Encoder, PipelineGradientCheck) {
  const Graph g = random_graph(10, 18, 2, 21, 3);
  Rng rng(22);
  EdgeEncoderParams p = EdgeEncoderParams::glorot(3, 4, rng);
  const std::vector<EdgeId> structural{0, 1, 4, 7, 9, 12};
  Matrix coef(static_cast<Eigen::Index>(g.num_edges()), 1);
  coef.setRandom();
  auto loss = [&](Tape& t, const EdgeEncoderVars& v) {
    const Var s = score_edges(t, v, encode_embedding(t, v, g, structural), g);
    // Random per-edge coefficients give every score a distinct gradient.
    return t.sum(t.mul(t.mul(s, s), t.constant(coef)));
  };
  Tape t;
  const auto v = bind(t, p, true);
  t.backward(loss(t, v));
  const std::vector<std::pair<Var, Matrix*>> slots{{v.enc_w0, &p.enc_w0}, {v.enc_w1, &p.enc_w1},
                                                   {v.mlp_w0, &p.mlp_w0}, {v.mlp_b0, &p.mlp_b0},
                                                   {v.mlp_w1, &p.mlp_w1}, {v.mlp_b1, &p.mlp_b1}};
  for (auto [var, m] : slots) {
    const Matrix g_an = t.grad(var);
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      for (Eigen::Index j = 0; j < m->cols(); ++j) {
        const double fd = central_difference(*m, i, j, [&] {
          Tape u;
          return u.scalar(loss(u, bind(u, p, false)));
        });
        ASSERT_LT(std::abs(g_an(i, j) - fd) / std::max(1e-6, std::abs(g_an(i, j)) + std::abs(fd)), 1e-4);
      }
    }
  }
}

TEST(Normalize, EqualScoresUniform) {
  for (NormMode m : {NormMode::sum, NormMode::softmax_temp, NormMode::gumbel_topk}) {
    for (double temp : {0.1, 1.0, 7.0}) {
      const auto d = normalize(std::vector<double>(5, 0.3), m, temp);
      for (double x : d.probs) ASSERT_NEAR(x, 0.2, 1e-15);
    }
  }
}

TEST(Normalize, SumMode) {
  const auto d = normalize({0.2, 0.8}, NormMode::sum, 1.0);
  EXPECT_NEAR(d.probs[0], 0.2, 1e-15);
  EXPECT_NEAR(d.probs[1], 0.8, 1e-15);
}

TEST(Normalize, SoftmaxClosedForm) {
  const auto d = normalize({0.0, 1.0}, NormMode::softmax_temp, 1.0);
  EXPECT_NEAR(d.probs[0], 0.26894, 1e-5);
  EXPECT_NEAR(d.probs[1], 0.73106, 1e-5);
}

TEST(Normalize, TemperatureLimits) {
  const std::vector<double> w{0.1, 0.9, 0.5, 0.3};
  const auto hot = normalize(w, NormMode::softmax_temp, 1e6);
  for (double x : hot.probs) EXPECT_LT(std::abs(x - 0.25), 1e-6);
  const auto cold = normalize(w, NormMode::softmax_temp, 1e-3);
  EXPECT_GT(cold.probs[1], 1.0 - 1e-12);
}

TEST(Normalize, DistributionProperty) {
  Rng rng(9);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  std::uniform_real_distribution<double> lt(-3.0, 2.0);
  for (int c = 0; c < kPropertyCases; ++c) {
    std::vector<double> w(1 + c * 7);
    for (double& x : w) x = u(rng);
    const double temp = std::pow(10.0, lt(rng));
    for (NormMode m : {NormMode::sum, NormMode::softmax_temp, NormMode::gumbel_topk}) {
      const auto d = normalize(w, m, temp);
      ASSERT_NEAR(std::accumulate(d.probs.begin(), d.probs.end(), 0.0), 1.0, 1e-9);
      for (double x : d.probs) ASSERT_GE(x, 0.0);
    }
  }
}

TEST(Anneal, LinearSchedule) {
  const AnnealSchedule s{};
  EXPECT_DOUBLE_EQ(anneal_temperature(s, 0), 1.0);
  EXPECT_NEAR(anneal_temperature(s, 250), 0.55, 1e-12);
  EXPECT_DOUBLE_EQ(anneal_temperature(s, 500), 0.1);
  EXPECT_DOUBLE_EQ(anneal_temperature(s, 900), 0.1);
}
