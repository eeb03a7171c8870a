#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gsparse/graph.hpp"
#include "gsparse/tape.hpp"

namespace gsparse {

struct LossWeights {
  double ce = 1.0;
  double assor = 1.0;
  double cons = 0.5;
  void validate() const;
};

struct LossBreakdown {
  double ce = 0.0;
  double assor = 0.0;
  double cons = 0.0;
  double total = 0.0;
};

struct AssortativityOptions {
  bool one_sided = false;
  Reduction reduction = Reduction::mean;
};

/// Edges given as local endpoint pairs aligned with a k x 1 score column.
using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

/// Tape forms. is_train marks the nodes whose labels supervise the losses.
Var cross_entropy(Tape& tape, Var probs, std::span<const int> labels, std::span<const NodeId> train_rows);
Var assortativity_loss(Tape& tape, Var raw_scores, const EdgeList& edges, std::span<const int> labels,
                       const std::vector<char>& is_train, AssortativityOptions opt = {});
Var consistency_loss(Tape& tape, Var sampled_scores, Var hidden, const EdgeList& sampled_edges,
                     Reduction reduction = Reduction::mean);

/// Value forms of the same losses.
double cross_entropy(const Matrix& probs, std::span<const int> labels, std::span<const NodeId> train_rows);
double assortativity_loss(std::span<const double> raw_scores, const EdgeList& edges, std::span<const int> labels,
                          const std::vector<char>& is_train, AssortativityOptions opt = {});
double consistency_loss(std::span<const double> sampled_scores, const Matrix& hidden, const EdgeList& sampled_edges,
                        Reduction reduction = Reduction::mean);

/// total = ce_w * ce + assor_w * assor + cons_w * cons.
LossBreakdown total_loss(double ce, double assor, double cons, const LossWeights& w);

} // namespace gsparse
