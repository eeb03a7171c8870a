#include "gsparse/gcn.hpp"

#include "gsparse/error.hpp"

namespace gsparse {

GnnParams GnnParams::glorot(const std::vector<Eigen::Index>& dims, bool with_bias, Rng& rng) {
  if (dims.size() < 2) throw Error("a GCN needs at least one layer");
  GnnParams p;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    p.weights.push_back(glorot_uniform(dims[l], dims[l + 1], rng));
    if (with_bias) p.biases.push_back(Matrix::Zero(1, dims[l + 1]));
  }
  return p;
}

std::vector<ParamRef> GnnParams::refs() {
  std::vector<ParamRef> r;
  for (std::size_t l = 0; l < weights.size(); ++l) r.push_back({"gnn.w" + std::to_string(l), &weights[l]});
  for (std::size_t l = 0; l < biases.size(); ++l) r.push_back({"gnn.b" + std::to_string(l), &biases[l]});
  return r;
}

GnnVars bind(Tape& tape, const GnnParams& p, bool trainable) {
  auto put = [&](const Matrix& m) { return trainable ? tape.parameter(m) : tape.constant(m); };
  GnnVars v;
  for (const Matrix& w : p.weights) v.weights.push_back(put(w));
  for (const Matrix& b : p.biases) v.biases.push_back(put(b));
  return v;
}

GnnOutput gcn_forward(Tape& tape, const GnnVars& v, std::shared_ptr<const AggregationGraph> graph, Var edge_weights,
                      Var x, bool train_mode, double dropout, Rng* rng) {
  if (v.weights.empty()) throw Error("a GCN needs at least one layer");
  if (!v.biases.empty() && v.biases.size() != v.weights.size()) throw Error("GCN bias count does not match depth");
  GnnOutput out;
  Var h = x;
  const std::size_t depth = v.weights.size();
  for (std::size_t l = 0; l < depth; ++l) {
    Var z = tape.aggregate(graph, edge_weights, tape.matmul(h, v.weights[l]));
    if (!v.biases.empty()) z = tape.add_bias(z, v.biases[l]);
    if (l + 1 == depth) {
      out.probs = tape.row_softmax(z);
      if (!out.hidden.valid()) out.hidden = z;
      break;
    }
    h = tape.relu(z);
    if (l == 0) {
      out.hidden = h;
      if (train_mode && dropout > 0.0) {
        if (rng == nullptr) throw Error("dropout needs a random stream");
        h = tape.dropout(h, dropout, *rng);
      }
    }
  }
  return out;
}

Matrix gcn_predict(const GnnParams& p, const SparseSubgraph& sg, const Matrix& x) {
  Tape tape;
  auto agg = std::make_shared<AggregationGraph>();
  agg->num_nodes = sg.num_nodes;
  agg->edges = sg.endpoints;
  Var w = tape.constant(Eigen::Map<const Matrix>(sg.weights.data(), static_cast<Eigen::Index>(sg.weights.size()), 1));
  GnnOutput out = gcn_forward(tape, bind(tape, p, false), agg, w, tape.constant(x), false, 0.0, nullptr);
  return tape.value(out.probs);
}

std::vector<int> predict_labels(const Matrix& probs) {
  std::vector<int> out(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < probs.cols(); ++c) {
      if (probs(i, c) > probs(i, best)) best = c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

} // namespace gsparse
