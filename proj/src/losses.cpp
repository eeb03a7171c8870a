#include "gsparse/losses.hpp"

#include "gsparse/error.hpp"

namespace gsparse {

void LossWeights::validate() const {
  for (double a : {ce, assor, cons}) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error("loss weights must lie in [0, 1]");
  }
}

Var cross_entropy(Tape& tape, Var probs, std::span<const int> labels, std::span<const NodeId> train_rows) {
  return tape.masked_nll(probs, labels, train_rows);
}

Var assortativity_loss(Tape& tape, Var raw_scores, const EdgeList& edges, std::span<const int> labels,
                       const std::vector<char>& is_train, AssortativityOptions opt) {
  if (static_cast<std::size_t>(tape.value(raw_scores).rows()) != edges.size()) {
    throw Error("assortativity_loss: score count does not match edge count");
  }
  std::vector<Eigen::Index> rows;
  std::vector<double> targets;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (!is_train[u] || !is_train[v]) continue;
    rows.push_back(static_cast<Eigen::Index>(i));
    targets.push_back(labels[u] == labels[v] ? 1.0 : 0.0);
  }
  Var picked = tape.gather_rows(raw_scores, std::move(rows));
  return tape.binary_cross_entropy(picked, std::move(targets), opt.one_sided, opt.reduction);
}

Var consistency_loss(Tape& tape, Var sampled_scores, Var hidden, const EdgeList& sampled_edges, Reduction reduction) {
  if (static_cast<std::size_t>(tape.value(sampled_scores).rows()) != sampled_edges.size()) {
    throw Error("consistency_loss: score count does not match edge count");
  }
  if (sampled_edges.empty()) return tape.constant(Matrix::Zero(1, 1));
  std::vector<Eigen::Index> us, vs;
  for (const auto& [u, v] : sampled_edges) {
    us.push_back(u);
    vs.push_back(v);
  }
  Var cos = tape.row_cosine(tape.gather_rows(hidden, std::move(us)), tape.gather_rows(hidden, std::move(vs)));
  Var gap = tape.abs(tape.sub(sampled_scores, cos));
  return reduction == Reduction::mean ? tape.mean(gap) : tape.sum(gap);
}

double cross_entropy(const Matrix& probs, std::span<const int> labels, std::span<const NodeId> train_rows) {
  Tape t;
  return t.scalar(cross_entropy(t, t.constant(probs), labels, train_rows));
}

double assortativity_loss(std::span<const double> raw_scores, const EdgeList& edges, std::span<const int> labels,
                          const std::vector<char>& is_train, AssortativityOptions opt) {
  Tape t;
  Var s = t.constant(Eigen::Map<const Matrix>(raw_scores.data(), static_cast<Eigen::Index>(raw_scores.size()), 1));
  return t.scalar(assortativity_loss(t, s, edges, labels, is_train, opt));
}

double consistency_loss(std::span<const double> sampled_scores, const Matrix& hidden, const EdgeList& sampled_edges,
                        Reduction reduction) {
  Tape t;
  Var s = t.constant(Eigen::Map<const Matrix>(sampled_scores.data(), static_cast<Eigen::Index>(sampled_scores.size()), 1));
  return t.scalar(consistency_loss(t, s, t.constant(hidden), sampled_edges, reduction));
}

LossBreakdown total_loss(double ce, double assor, double cons, const LossWeights& w) {
  w.validate();
  return {ce, assor, cons, w.ce * ce + w.assor * assor + w.cons * cons};
}

} // namespace gsparse
