#pragma once

#include <memory>
#include <vector>

#include "gsparse/adam.hpp"
#include "gsparse/rng.hpp"
#include "gsparse/sampler.hpp"
#include "gsparse/tape.hpp"

namespace gsparse {

/// Edge-weighted GCN. Layer l computes Â H W_l (+ b_l), ReLU on every layer
/// but the last, row softmax on the last. Â = D^-1/2 (A + I) D^-1/2 with A
/// holding the sampled edge weights.
struct GnnParams {
  std::vector<Matrix> weights;
  std::vector<Matrix> biases;  // empty, or one 1 x cols row per layer

  /// dims = {F, H, ..., C}; layers = dims.size() - 1.
  static GnnParams glorot(const std::vector<Eigen::Index>& dims, bool with_bias, Rng& rng);
  std::size_t depth() const { return weights.size(); }
  std::vector<ParamRef> refs();
};

struct GnnVars {
  std::vector<Var> weights;
  std::vector<Var> biases;
};

GnnVars bind(Tape& tape, const GnnParams& p, bool trainable);

struct GnnOutput {
  Var probs;   // |V| x C, rows sum to 1
  Var hidden;  // first-layer output before dropout
};

/// dropout applies to the first-layer output and only when train_mode is set.
GnnOutput gcn_forward(Tape& tape, const GnnVars& v, std::shared_ptr<const AggregationGraph> graph, Var edge_weights,
                      Var x, bool train_mode, double dropout, Rng* rng);

/// Value-only forward over a sparse subgraph, dropout off.
Matrix gcn_predict(const GnnParams& p, const SparseSubgraph& sg, const Matrix& x);

/// Row argmax; ties go to the lowest class id.
std::vector<int> predict_labels(const Matrix& probs);

} // namespace gsparse
