#include "gsparse/edge_encoder.hpp"

#include <algorithm>
#include <cmath>

#include "gsparse/error.hpp"
#include "gsparse/sampler.hpp"

namespace gsparse {

EdgeEncoderParams EdgeEncoderParams::glorot(Eigen::Index features, Eigen::Index hidden, Rng& rng) {
  EdgeEncoderParams p;
  p.enc_w0 = glorot_uniform(features, hidden, rng);
  p.enc_w1 = glorot_uniform(hidden, hidden, rng);
  p.mlp_w0 = glorot_uniform(2 * hidden, hidden, rng);
  p.mlp_b0 = Matrix::Zero(1, hidden);
  p.mlp_w1 = glorot_uniform(hidden, 1, rng);
  p.mlp_b1 = Matrix::Zero(1, 1);
  return p;
}

EdgeEncoderParams EdgeEncoderParams::zeros(Eigen::Index features, Eigen::Index hidden) {
  EdgeEncoderParams p;
  p.enc_w0 = Matrix::Zero(features, hidden);
  p.enc_w1 = Matrix::Zero(hidden, hidden);
  p.mlp_w0 = Matrix::Zero(2 * hidden, hidden);
  p.mlp_b0 = Matrix::Zero(1, hidden);
  p.mlp_w1 = Matrix::Zero(hidden, 1);
  p.mlp_b1 = Matrix::Zero(1, 1);
  return p;
}

std::vector<ParamRef> EdgeEncoderParams::refs() {
  return {{"encoder.enc_w0", &enc_w0}, {"encoder.enc_w1", &enc_w1}, {"encoder.mlp_w0", &mlp_w0},
          {"encoder.mlp_b0", &mlp_b0}, {"encoder.mlp_w1", &mlp_w1}, {"encoder.mlp_b1", &mlp_b1}};
}

EdgeEncoderVars bind(Tape& tape, const EdgeEncoderParams& p, bool trainable) {
  auto put = [&](const Matrix& m) { return trainable ? tape.parameter(m) : tape.constant(m); };
  return {put(p.enc_w0), put(p.enc_w1), put(p.mlp_w0), put(p.mlp_b0), put(p.mlp_w1), put(p.mlp_b1)};
}

std::shared_ptr<const AggregationGraph> aggregation_graph(const Graph& g) {
  auto a = std::make_shared<AggregationGraph>();
  a->num_nodes = g.num_nodes();
  a->edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) a->edges.emplace_back(e.u, e.v);
  return a;
}

std::shared_ptr<const AggregationGraph> aggregation_graph(const Graph& g, std::span<const EdgeId> subset) {
  auto a = std::make_shared<AggregationGraph>();
  a->num_nodes = g.num_nodes();
  a->edges.reserve(subset.size());
  for (EdgeId id : subset) {
    if (id >= g.num_edges()) throw Error("edge index " + std::to_string(id) + " out of range");
    a->edges.emplace_back(g.edge(id).u, g.edge(id).v);
  }
  return a;
}

Var encode_embedding(Tape& tape, const EdgeEncoderVars& v, const Graph& g, std::span<const EdgeId> structural_edges) {
  auto agg = aggregation_graph(g, structural_edges);
  Var ones = tape.constant(Matrix::Ones(static_cast<Eigen::Index>(structural_edges.size()), 1));
  Var x = tape.constant(g.features());
  Var xw = tape.matmul(x, v.enc_w0);
  Var h = tape.relu(tape.aggregate(agg, ones, xw));
  return tape.add(xw, tape.aggregate(agg, ones, tape.matmul(h, v.enc_w1)));
}

Var encode_structural_embedding(Tape& tape, const EdgeEncoderVars& v, const Graph& g, std::span<const double> prior,
                                double q, Rng& rng) {
  const std::size_t k = edges_to_keep(q, g.num_edges());
  if (k == 0) throw Error("structural subgraph would be empty at q=" + std::to_string(q));
  const auto picked = sample_multinomial_k(prior, k, rng);
  return encode_embedding(tape, v, g, picked);
}

Var score_edges(Tape& tape, const EdgeEncoderVars& v, Var embedding, const Graph& g) {
  if (static_cast<std::size_t>(tape.value(embedding).rows()) != g.num_nodes()) {
    throw Error("score_edges: embedding rows do not match node count");
  }
  std::vector<Eigen::Index> us, vs;
  us.reserve(g.num_edges());
  vs.reserve(g.num_edges());
  for (const Edge& e : g.edges()) {
    us.push_back(e.u);
    vs.push_back(e.v);
  }
  // [h_u - h_v, h_u * h_v] W0 split so the difference half runs per node.
  const Eigen::Index d = tape.value(embedding).cols();
  Var proj = tape.matmul(embedding, tape.row_block(v.mlp_w0, 0, d));
  Var diff = tape.sub(tape.gather_rows(proj, us), tape.gather_rows(proj, vs));
  Var hu = tape.gather_rows(embedding, std::move(us));
  Var hv = tape.gather_rows(embedding, std::move(vs));
  Var prod = tape.matmul(tape.mul(hu, hv), tape.row_block(v.mlp_w0, d, d));
  Var hidden = tape.relu(tape.add_bias(tape.add(diff, prod), v.mlp_b0));
  return tape.sigmoid(tape.add_bias(tape.matmul(hidden, v.mlp_w1), v.mlp_b1));
}

const char* to_string(NormMode m) {
  switch (m) {
  case NormMode::sum: return "sum";
  case NormMode::softmax_temp: return "softmax_temp";
  case NormMode::gumbel_topk: return "gumbel_topk";
  }
  return "?";
}

NormMode parse_norm_mode(const std::string& s) {
  if (s == "sum") return NormMode::sum;
  if (s == "softmax_temp") return NormMode::softmax_temp;
  if (s == "gumbel_topk") return NormMode::gumbel_topk;
  throw Error("unknown normalization mode '" + s + "'");
}

EdgeDistribution normalize(std::vector<double> raw_scores, NormMode mode, double temperature) {
  if (raw_scores.empty()) throw Error("normalizing an empty score vector");
  EdgeDistribution d;
  d.mode = mode;
  d.temperature = temperature;
  d.probs.resize(raw_scores.size());
  if (mode == NormMode::softmax_temp) {
    if (!(temperature > 0.0)) throw Error("temperature must be positive");
    const double mx = *std::max_element(raw_scores.begin(), raw_scores.end());
    double s = 0.0;
    for (std::size_t i = 0; i < raw_scores.size(); ++i) {
      d.probs[i] = std::exp((raw_scores[i] - mx) / temperature);
      s += d.probs[i];
    }
    for (double& p : d.probs) p /= s;
  } else {
    double s = 0.0;
    for (double w : raw_scores) {
      if (!(w >= 0.0)) throw Error("negative edge score");
      s += w;
    }
    if (!(s > 0.0)) throw Error("sum normalization of all-zero scores");
    for (std::size_t i = 0; i < raw_scores.size(); ++i) d.probs[i] = raw_scores[i] / s;
  }
  d.raw_scores = std::move(raw_scores);
  return d;
}

double anneal_temperature(const AnnealSchedule& s, int epoch) {
  if (!(s.t0 >= s.t_min && s.t_min > 0.0)) throw Error("annealing needs t0 >= t_min > 0");
  if (epoch < 0) throw Error("negative epoch");
  if (s.max_epochs <= 0) return s.t_min;
  return std::max(s.t_min, s.t0 - static_cast<double>(epoch) * s.rate());
}

} // namespace gsparse
