#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "gsparse/graph.hpp"
#include "gsparse/matrix.hpp"
#include "gsparse/rng.hpp"

namespace gsparse {

/// Handle to a slot on a Tape.
struct Var {
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t id = kNone;
  bool valid() const { return id != kNone; }
};

/// Undirected edge list over local node ids used by Tape::aggregate. Edges
/// must be distinct and free of self-loops; unit self-loops are implied.
struct AggregationGraph {
  std::size_t num_nodes = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;
};

enum class Reduction { mean, sum };

/// Records a forward computation over dense matrices and replays it backward.
///
/// The primitive set is closed: exactly what the edge encoder, the weighted
/// GCN and the training losses need. Every primitive checks shapes, and each
/// result is a new slot. Slots created by constant() never receive
/// gradients; anything computed from a parameter() does.
class Tape {
public:
  Var constant(Matrix value);
  Var parameter(Matrix value);

  const Matrix& value(Var v) const;
  double scalar(Var v) const;
  /// Gradient accumulated by the last backward(); a zero matrix if none reached v.
  Matrix grad(Var v) const;
  bool requires_grad(Var v) const { return node(v).requires_grad; }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, double s);
  /// x + bias, with bias a 1 x cols row broadcast over the rows of x.
  Var add_bias(Var x, Var bias);
  Var relu(Var x);
  Var sigmoid(Var x);
  Var abs(Var x);
  Var row_softmax(Var x);
  Var concat_cols(Var a, Var b);
  Var gather_rows(Var x, std::vector<Eigen::Index> rows);
  /// Rows [start, start + count) of x.
  Var row_block(Var x, Eigen::Index start, Eigen::Index count);
  /// Inverted dropout: zeroes entries with probability rate, scales survivors by 1/(1-rate).
  Var dropout(Var x, double rate, Rng& rng);
  /// D^-1/2 (A + I) D^-1/2 x, with A built from the edge list and the k x 1
  /// edge weights. Gradients flow to both x and the weights, including
  /// through the degree normalization.
  Var aggregate(std::shared_ptr<const AggregationGraph> graph, Var weights, Var x);
  Var sum(Var x);
  Var mean(Var x);
  /// sum_i coefs[i] * terms[i] over 1 x 1 slots.
  Var weighted_sum(std::span<const Var> terms, std::span<const double> coefs);
  /// Row-wise cosine similarity of a and b as a k x 1 column; rows where
  /// either norm is below 1e-12 give 0.
  Var row_cosine(Var a, Var b);
  /// -(1/|rows|) sum_r log max(probs[r, labels[r]], 1e-12).
  Var masked_nll(Var probs, std::span<const int> labels, std::span<const NodeId> rows);
  /// Binary cross-entropy of a k x 1 column of probabilities against 0/1
  /// targets, probabilities clamped to [1e-12, 1-1e-12]. With one_sided only
  /// the -t log p term is kept. An empty column gives 0.
  Var binary_cross_entropy(Var probs, std::vector<double> targets, bool one_sided, Reduction reduction);

  /// Reverse sweep from a 1 x 1 slot that depends on at least one parameter.
  void backward(Var loss);

private:
  using Backward = std::function<void(Tape&, const Matrix& out_grad)>;

  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    Backward backward;
  };

  const Node& node(Var v) const;
  Var push(Matrix value, bool requires_grad, Backward backward);
  Var push_unary(Var x, Matrix value, Backward backward);
  template <typename Expr>
  void accumulate(std::uint32_t id, const Expr& g);
  void accumulate(std::uint32_t id, Matrix&& g);
  /// Gradient slot of id, zero-filled on first use; null when id needs no gradient.
  Matrix* grad_buffer(std::uint32_t id);

  std::vector<Node> nodes_;
};

} // namespace gsparse
