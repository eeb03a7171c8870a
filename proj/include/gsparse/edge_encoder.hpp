#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gsparse/adam.hpp"
#include "gsparse/graph.hpp"
#include "gsparse/rng.hpp"
#include "gsparse/tape.hpp"

namespace gsparse {

/// Learnable edge scorer. Node embedding h = X W0 + Â relu(Â X W0) W1
/// with Â over a prior-sampled structural subgraph, followed by an MLP over
/// [h_u - h_v, h_u * h_v] with one ReLU hidden layer and a sigmoid output.
struct EdgeEncoderParams {
  Matrix enc_w0;  // F x H
  Matrix enc_w1;  // H x H
  Matrix mlp_w0;  // 2H x H
  Matrix mlp_b0;  // 1 x H
  Matrix mlp_w1;  // H x 1
  Matrix mlp_b1;  // 1 x 1

  static EdgeEncoderParams glorot(Eigen::Index features, Eigen::Index hidden, Rng& rng);
  static EdgeEncoderParams zeros(Eigen::Index features, Eigen::Index hidden);
  std::vector<ParamRef> refs();
};

struct EdgeEncoderVars {
  Var enc_w0, enc_w1, mlp_w0, mlp_b0, mlp_w1, mlp_b1;
};

/// Places the parameters on the tape; trainable = false records them as constants.
EdgeEncoderVars bind(Tape& tape, const EdgeEncoderParams& p, bool trainable);

/// N x H embedding X W0 + Â relu(Â X W0) W1, Â over a unit-weight structural
/// subgraph of floor(q|E|/100) distinct edges drawn from the prior. Throws
/// when that count is 0.
Var encode_structural_embedding(Tape& tape, const EdgeEncoderVars& v, const Graph& g, std::span<const double> prior,
                                double q, Rng& rng);

/// Encoder pass over a given structural edge subset (canonical ids of g).
Var encode_embedding(Tape& tape, const EdgeEncoderVars& v, const Graph& g, std::span<const EdgeId> structural_edges);

/// |E| x 1 column of sigmoid(MLP([h_u - h_v, h_u * h_v])) over the canonical edges of g.
Var score_edges(Tape& tape, const EdgeEncoderVars& v, Var embedding, const Graph& g);

enum class NormMode { sum, softmax_temp, gumbel_topk };

const char* to_string(NormMode m);
NormMode parse_norm_mode(const std::string& s);

struct EdgeDistribution {
  std::vector<double> raw_scores;
  std::vector<double> probs;
  NormMode mode = NormMode::softmax_temp;
  double temperature = 1.0;
};

/// sum: w / sum(w). softmax_temp: softmax(w / T). gumbel_topk: probs hold
/// w / sum(w), the selection marginal of a single Gumbel-max draw; the
/// sampler adds the noise.
EdgeDistribution normalize(std::vector<double> raw_scores, NormMode mode, double temperature);

struct AnnealSchedule {
  double t0 = 1.0;
  double t_min = 0.1;
  int max_epochs = 500;
  double rate() const { return (t0 - t_min) / static_cast<double>(max_epochs); }
};

/// max(t_min, t0 - epoch * rate).
double anneal_temperature(const AnnealSchedule& s, int epoch);

/// Canonical edges of g as an aggregation graph, optionally restricted to a subset.
std::shared_ptr<const AggregationGraph> aggregation_graph(const Graph& g);
std::shared_ptr<const AggregationGraph> aggregation_graph(const Graph& g, std::span<const EdgeId> subset);

} // namespace gsparse
