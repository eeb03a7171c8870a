#include "gsparse/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "gsparse/baselines.hpp"
#include "gsparse/error.hpp"
#include "gsparse/metrics.hpp"
#include "gsparse/partition.hpp"
#include "gsparse/prior.hpp"
#include "gsparse/sampler.hpp"

namespace gsparse {

const char* to_string(Method m) {
  switch (m) {
  case Method::sgs: return "sgs";
  case Method::full: return "full";
  case Method::random: return "random";
  case Method::degree: return "degree";
  case Method::er: return "er";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "sgs") return Method::sgs;
  if (s == "full") return Method::full;
  if (s == "random") return Method::random;
  if (s == "degree") return Method::degree;
  if (s == "er") return Method::er;
  throw Error("unknown method '" + s + "'");
}

void RunConfig::validate() const {
  if (!(q > 0.0 && q <= 100.0)) throw Error("q must lie in (0, 100]");
  if (hidden < 1) throw Error("hidden must be at least 1");
  if (layers < 1) throw Error("layers must be at least 1");
  if (!(lr > 0.0)) throw Error("lr must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("dropout must lie in [0, 1)");
  if (max_epochs < 1) throw Error("max_epochs must be at least 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must lie in [0, 1]");
  alpha.validate();
  if (!(t0 >= t_min && t_min > 0.0)) throw Error("temperatures need t0 >= t_min > 0");
  if (edge_cap < 1) throw Error("edge_cap must be at least 1");
  if (ensemble < 1) throw Error("ensemble must be at least 1");
  if (patience < 1) throw Error("patience must be at least 1");
}

namespace {

// Stream tags for derive_seed; each random purpose gets its own stream.
enum : std::uint64_t {
  kInitStream = 0x1A17,
  kPartitionStream = 0x9A27,
  kStructStream = 0x5757,
  kSampleStream = 0x5A3B,
  kDropoutStream = 0xD80B,
  kBaselineStream = 0xBA5E,
  kEvalStream = 0xE7A1,
  kFinalStream = 0xF1A1,
};

struct PartData {
  Graph graph;
  std::vector<NodeId> global_nodes;
  std::size_t num_core = 0;
  std::vector<EdgeId> global_edges;
  std::vector<NodeId> train_rows;
  std::vector<char> is_train;
  std::vector<double> prior;
  std::vector<double> fixed;
  EdgeList endpoints;
  std::size_t k = 0;
};

std::vector<double> restrict_normalized(const std::vector<double>& global, std::span<const EdgeId> ids) {
  std::vector<double> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = global[ids[i]];
  return normalized(std::move(out));
}

std::vector<PartData> prepare_parts(const Graph& g, const RunConfig& cfg) {
  if (g.num_edges() == 0) throw Error("training needs a graph with edges");
  const Partition partition = partition_graph(g, cfg.edge_cap, derive_seed(cfg.seed, {kPartitionStream}));
  const std::vector<double> prior = compute_prior(g);
  std::vector<double> fixed;
  switch (cfg.method) {
  case Method::random: fixed = random_distribution(g); break;
  case Method::degree: fixed = degree_weighted_distribution(g); break;
  case Method::er: fixed = effective_resistance_distribution(g); break;
  default: break;
  }

  std::vector<PartData> parts;
  for (const Part& part : partition.parts) {
    if (part.edges.empty()) continue;
    PartData pd;
    pd.global_nodes = part.nodes;
    pd.num_core = part.num_core;
    std::vector<NodeId> local(g.num_nodes(), 0);
    for (std::size_t i = 0; i < part.nodes.size(); ++i) local[part.nodes[i]] = static_cast<NodeId>(i);

    std::vector<std::pair<std::pair<NodeId, NodeId>, EdgeId>> keyed;
    for (EdgeId e : part.edges) {
      NodeId a = local[g.edge(e).u], b = local[g.edge(e).v];
      if (a > b) std::swap(a, b);
      keyed.push_back({{a, b}, e});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (const auto& [p, e] : keyed) {
      pairs.push_back(p);
      pd.global_edges.push_back(e);
    }

    const auto n = static_cast<Eigen::Index>(part.nodes.size());
    Matrix x(n, g.feature_dim());
    std::vector<int> labels(part.nodes.size());
    std::vector<Split> split(part.nodes.size());
    for (std::size_t i = 0; i < part.nodes.size(); ++i) {
      x.row(static_cast<Eigen::Index>(i)) = g.features().row(part.nodes[i]);
      labels[i] = g.label(part.nodes[i]);
      split[i] = g.split()[part.nodes[i]];
    }
    pd.graph = Graph(part.nodes.size(), pairs, std::move(x), std::move(labels), std::move(split), g.num_classes());
    pd.is_train.assign(part.nodes.size(), 0);
    for (std::size_t i = 0; i < pd.num_core; ++i) {
      if (pd.graph.split()[i] == Split::train) {
        pd.train_rows.push_back(static_cast<NodeId>(i));
        pd.is_train[i] = 1;
      }
    }
    pd.prior = restrict_normalized(prior, pd.global_edges);
    if (!fixed.empty()) pd.fixed = restrict_normalized(fixed, pd.global_edges);
    for (const Edge& e : pd.graph.edges()) pd.endpoints.emplace_back(e.u, e.v);
    pd.k = cfg.method == Method::full ? pd.graph.num_edges() : edges_to_keep(cfg.q, pd.graph.num_edges());
    if (pd.k == 0) {
      throw Error("q=" + std::to_string(cfg.q) + " keeps no edge of a part with " +
                  std::to_string(pd.graph.num_edges()) + " edges");
    }
    parts.push_back(std::move(pd));
  }
  return parts;
}

std::vector<Eigen::Index> as_index(const std::vector<EdgeId>& ids) { return {ids.begin(), ids.end()}; }

EdgeList endpoints_of(const PartData& pd, const std::vector<EdgeId>& ids) {
  EdgeList out;
  out.reserve(ids.size());
  for (EdgeId e : ids) out.push_back(pd.endpoints[e]);
  return out;
}

std::vector<double> column(const Matrix& m) { return {m.data(), m.data() + m.size()}; }

// Raw scores of every edge of a part, from a fresh structural embedding.
std::vector<double> part_scores(const PartData& pd, const EdgeEncoderParams& enc, const RunConfig& cfg, Rng& rng) {
  Tape t;
  EdgeEncoderVars ev = bind(t, enc, false);
  Var h = encode_structural_embedding(t, ev, pd.graph, pd.prior, cfg.q, rng);
  return column(t.value(score_edges(t, ev, h, pd.graph)));
}

// Draws the subgraph a trained model uses at inference: the learned
// distribution for sgs, the fixed one otherwise.
SparseSubgraph draw_part_subgraph(const PartData& pd, const ModelParams& params, const RunConfig& cfg, double temp,
                                  Rng& rng) {
  if (cfg.method == Method::sgs) {
    std::vector<double> w = part_scores(pd, params.encoder, cfg, rng);
    std::vector<EdgeId> idx;
    if (cfg.norm_mode == NormMode::gumbel_topk) {
      idx = sample_gumbel_topk(w, pd.k, temp, rng);
    } else {
      idx = sample_multinomial_k(normalize(w, cfg.norm_mode, temp).probs, pd.k, rng);
    }
    return build_subgraph(pd.graph, idx, w);
  }
  const std::vector<double> ones(pd.graph.num_edges(), 1.0);
  if (cfg.method == Method::full) {
    std::vector<EdgeId> all(pd.graph.num_edges());
    std::iota(all.begin(), all.end(), EdgeId{0});
    return build_subgraph(pd.graph, all, ones);
  }
  return build_subgraph(pd.graph, sample_multinomial_k(pd.fixed, pd.k, rng), ones);
}

InferenceResult run_inference(const std::vector<PartData>& parts, const Graph& g, const ModelParams& params,
                              const RunConfig& cfg, double temp, int samples, std::uint64_t stream_seed) {
  InferenceResult res;
  res.probs = Matrix::Zero(static_cast<Eigen::Index>(g.num_nodes()), g.num_classes());
  std::vector<char> covered(g.num_nodes(), 0);
  double homophily_total = 0.0;
  for (int r = 0; r < samples; ++r) {
    std::vector<EdgeId> kept;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const PartData& pd = parts[p];
      Rng rng = make_rng(stream_seed, {static_cast<std::uint64_t>(r), p});
      SparseSubgraph sg = draw_part_subgraph(pd, params, cfg, temp, rng);
      const Matrix probs = gcn_predict(params.gnn, sg, pd.graph.features());
      for (std::size_t i = 0; i < pd.num_core; ++i) {
        res.probs.row(pd.global_nodes[i]) += probs.row(static_cast<Eigen::Index>(i));
        covered[pd.global_nodes[i]] = 1;
      }
      for (EdgeId e : sg.edge_indices) kept.push_back(pd.global_edges[e]);
    }
    homophily_total += subgraph_edge_homophily(g, kept);
  }
  res.probs /= static_cast<double>(samples);
  // Nodes of edgeless parts only see their own features.
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    if (covered[i]) continue;
    SparseSubgraph lone;
    lone.num_nodes = 1;
    res.probs.row(static_cast<Eigen::Index>(i)) = gcn_predict(params.gnn, lone, g.features().row(static_cast<Eigen::Index>(i)));
  }
  res.labels = predict_labels(res.probs);
  res.subgraph_edge_homophily = homophily_total / static_cast<double>(samples);
  return res;
}

std::vector<Matrix> grads_of(const Tape& t, const std::vector<Var>& vars) {
  std::vector<Matrix> out;
  out.reserve(vars.size());
  for (Var v : vars) out.push_back(t.grad(v));
  return out;
}

std::vector<Var> encoder_var_list(const EdgeEncoderVars& v) {
  return {v.enc_w0, v.enc_w1, v.mlp_w0, v.mlp_b0, v.mlp_w1, v.mlp_b1};
}

std::vector<Var> gnn_var_list(const GnnVars& v) {
  std::vector<Var> out = v.weights;
  out.insert(out.end(), v.biases.begin(), v.biases.end());
  return out;
}

struct StepOutcome {
  LossBreakdown loss;
  bool encoder_updated = false;
};

void require_finite(double value, int epoch, std::size_t part) {
  if (!std::isfinite(value)) {
    throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) + ", part " + std::to_string(part));
  }
}

StepOutcome sgs_step(const PartData& pd, ModelState& st, const RunConfig& cfg, int epoch, std::size_t part,
                     double temp) {
  const auto e = static_cast<std::uint64_t>(epoch);
  Rng r_struct = make_rng(cfg.seed, {kStructStream, e, part});
  Rng r_sample = make_rng(cfg.seed, {kSampleStream, e, part});
  Rng r_drop = make_rng(cfg.seed, {kDropoutStream, e, part});
  Rng r_base = make_rng(cfg.seed, {kBaselineStream, e, part});

  Tape t;
  EdgeEncoderVars ev = bind(t, st.current.encoder, true);
  GnnVars gv = bind(t, st.current.gnn, true);
  Var h = encode_structural_embedding(t, ev, pd.graph, pd.prior, cfg.q, r_struct);
  Var w = score_edges(t, ev, h, pd.graph);
  const std::vector<double> wv = column(t.value(w));

  std::vector<EdgeId> idx;
  if (cfg.norm_mode == NormMode::gumbel_topk) {
    const auto pa = augment_with_prior(normalize(wv, NormMode::sum, temp).probs, pd.prior, cfg.lambda);
    idx = sample_gumbel_topk(pa, pd.k, 1.0, r_sample);
  } else {
    const auto pa = augment_with_prior(normalize(wv, cfg.norm_mode, temp).probs, pd.prior, cfg.lambda);
    idx = sample_multinomial_k(pa, pd.k, r_sample);
  }
  const EdgeList sampled = endpoints_of(pd, idx);
  auto agg = std::make_shared<AggregationGraph>();
  agg->num_nodes = pd.graph.num_nodes();
  agg->edges = sampled;
  Var wt = t.gather_rows(w, as_index(idx));
  Var x = t.constant(pd.graph.features());
  GnnOutput out = gcn_forward(t, gv, agg, wt, x, true, cfg.dropout, &r_drop);

  Var ce = cross_entropy(t, out.probs, pd.graph.labels(), pd.train_rows);
  Var assor = assortativity_loss(t, w, pd.endpoints, pd.graph.labels(), pd.is_train,
                                 {cfg.assor_one_sided, cfg.reduction});
  Var cons = consistency_loss(t, wt, out.hidden, sampled, cfg.reduction);
  const Var terms[] = {ce, assor, cons};
  const double coefs[] = {cfg.alpha.ce, cfg.alpha.assor, cfg.alpha.cons};
  Var total = t.weighted_sum(terms, coefs);

  StepOutcome res;
  res.loss = total_loss(t.scalar(ce), t.scalar(assor), t.scalar(cons), cfg.alpha);
  require_finite(res.loss.total, epoch, part);

  bool full_update = true;
  if (cfg.conditional) {
    const SparseSubgraph learned = build_subgraph(pd.graph, idx, wv);
    const auto base_idx = sample_multinomial_k(pd.prior, pd.k, r_base);
    const SparseSubgraph baseline = build_subgraph(pd.graph, base_idx, wv);
    const auto& labels = pd.graph.labels();
    const double f_learned = micro_f1(predict_labels(gcn_predict(st.current.gnn, learned, pd.graph.features())),
                                      labels, pd.train_rows);
    const double f_base = micro_f1(predict_labels(gcn_predict(st.current.gnn, baseline, pd.graph.features())),
                                   labels, pd.train_rows);
    full_update = f_learned >= f_base;
  }

  const auto gvars = gnn_var_list(gv);
  if (full_update) {
    t.backward(total);
    const auto evars = encoder_var_list(ev);
    adam_step(st.adam_encoder, st.current.encoder.refs(), grads_of(t, evars));
    res.encoder_updated = true;
  } else {
    t.backward(ce);
  }
  adam_step(st.adam_gnn, st.current.gnn.refs(), grads_of(t, gvars));
  return res;
}

StepOutcome fixed_step(const PartData& pd, ModelState& st, const RunConfig& cfg, int epoch, std::size_t part) {
  const auto e = static_cast<std::uint64_t>(epoch);
  Rng r_sample = make_rng(cfg.seed, {kSampleStream, e, part});
  Rng r_drop = make_rng(cfg.seed, {kDropoutStream, e, part});

  std::vector<EdgeId> idx;
  if (cfg.method == Method::full) {
    idx.resize(pd.graph.num_edges());
    std::iota(idx.begin(), idx.end(), EdgeId{0});
  } else {
    idx = sample_multinomial_k(pd.fixed, pd.k, r_sample);
  }
  Tape t;
  GnnVars gv = bind(t, st.current.gnn, true);
  auto agg = std::make_shared<AggregationGraph>();
  agg->num_nodes = pd.graph.num_nodes();
  agg->edges = endpoints_of(pd, idx);
  Var ones = t.constant(Matrix::Ones(static_cast<Eigen::Index>(idx.size()), 1));
  GnnOutput out = gcn_forward(t, gv, agg, ones, t.constant(pd.graph.features()), true, cfg.dropout, &r_drop);
  Var ce = cross_entropy(t, out.probs, pd.graph.labels(), pd.train_rows);
  StepOutcome res;
  res.loss = total_loss(t.scalar(ce), 0.0, 0.0, cfg.alpha);
  res.loss.total = res.loss.ce;
  require_finite(res.loss.total, epoch, part);
  t.backward(ce);
  adam_step(st.adam_gnn, st.current.gnn.refs(), grads_of(t, gnn_var_list(gv)));
  return res;
}

void check_compatible(const ModelState& st, const Graph& g) {
  if (st.num_nodes != g.num_nodes()) {
    throw Error("model was trained on " + std::to_string(st.num_nodes) + " nodes, graph has " +
                std::to_string(g.num_nodes()));
  }
  if (st.best.encoder.enc_w0.rows() != g.feature_dim() || st.best.gnn.weights.empty() ||
      st.best.gnn.weights.front().rows() != g.feature_dim()) {
    throw Error("model feature width does not match the graph's " + std::to_string(g.feature_dim()));
  }
  if (st.best.gnn.weights.back().cols() != g.num_classes()) {
    throw Error("model class count does not match the graph's " + std::to_string(g.num_classes()));
  }
}

double masked_nll_value(const Matrix& probs, const Graph& g, const std::vector<NodeId>& rows) {
  if (rows.empty()) return 0.0;
  return cross_entropy(probs, g.labels(), rows);
}

} // namespace

bool detect_convergence(std::span<const double> losses) {
  constexpr std::size_t kWindow = 5;
  constexpr double kMaxStd = 1e-3;
  if (losses.size() < kWindow) return false;
  const auto tail = losses.subspan(losses.size() - kWindow);
  const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / kWindow;
  double var = 0.0;
  for (double x : tail) var += (x - mean) * (x - mean);
  return std::sqrt(var / kWindow) <= kMaxStd;
}

ModelState init_state(const Graph& g, const RunConfig& cfg) {
  cfg.validate();
  ModelState st;
  Rng rng = make_rng(cfg.seed, {kInitStream});
  st.current.encoder = EdgeEncoderParams::glorot(g.feature_dim(), cfg.hidden, rng);
  std::vector<Eigen::Index> dims{g.feature_dim()};
  for (int l = 0; l + 1 < cfg.layers; ++l) dims.push_back(cfg.hidden);
  dims.push_back(g.num_classes());
  st.current.gnn = GnnParams::glorot(dims, cfg.gnn_bias, rng);
  st.best = st.current;
  st.adam_encoder.lr = cfg.lr;
  st.adam_gnn.lr = cfg.lr;
  st.best_t = cfg.t0;
  st.num_nodes = g.num_nodes();
  return st;
}

TrainResult train(const Graph& g, const RunConfig& cfg, std::optional<ModelState> resume) {
  cfg.validate();
  const std::vector<NodeId> train_nodes = g.nodes_in(Split::train);
  const std::vector<NodeId> val_nodes = g.nodes_in(Split::val);
  const std::vector<NodeId> test_nodes = g.nodes_in(Split::test);
  if (train_nodes.empty()) throw Error("graph has no training nodes");
  // Without a validation split, selection falls back to the training nodes.
  const std::vector<NodeId>& select_nodes = val_nodes.empty() ? train_nodes : val_nodes;

  const std::vector<PartData> parts = prepare_parts(g, cfg);
  TrainResult res;
  res.state = resume ? std::move(*resume) : init_state(g, cfg);
  ModelState& st = res.state;
  if (st.current.gnn.weights.empty() || st.current.gnn.weights.front().rows() != g.feature_dim() ||
      st.current.gnn.weights.back().cols() != g.num_classes() || st.num_nodes != g.num_nodes()) {
    throw Error("model state does not match the graph's feature or class count");
  }
  const AnnealSchedule schedule{cfg.t0, cfg.t_min, cfg.max_epochs};

  auto stopped = [&] {
    return st.epochs_since_improvement >= cfg.patience || (cfg.stop_on_convergence && st.converged_epoch > 0);
  };
  for (int epoch = st.epoch; epoch < cfg.max_epochs && !stopped(); ++epoch) {
    const double temp = cfg.method == Method::sgs ? anneal_temperature(schedule, epoch) : cfg.t0;
    EpochMetrics m;
    m.epoch = epoch;
    m.temperature = temp;
    std::size_t trained_parts = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      if (parts[p].train_rows.empty()) continue;
      const StepOutcome o =
          cfg.method == Method::sgs ? sgs_step(parts[p], st, cfg, epoch, p, temp) : fixed_step(parts[p], st, cfg, epoch, p);
      m.loss.ce += o.loss.ce;
      m.loss.assor += o.loss.assor;
      m.loss.cons += o.loss.cons;
      m.loss.total += o.loss.total;
      m.encoder_updates += o.encoder_updated;
      ++trained_parts;
    }
    if (trained_parts == 0) throw Error("no part contains training nodes");
    const double inv = 1.0 / static_cast<double>(trained_parts);
    m.loss.ce *= inv;
    m.loss.assor *= inv;
    m.loss.cons *= inv;
    m.loss.total *= inv;

    const InferenceResult eval =
        run_inference(parts, g, st.current, cfg, temp, 1, derive_seed(cfg.seed, {kEvalStream, static_cast<std::uint64_t>(epoch)}));
    m.train_micro_f1 = micro_f1(eval.labels, g.labels(), train_nodes);
    m.train_macro_f1 = macro_f1(eval.labels, g.labels(), train_nodes);
    if (!val_nodes.empty()) {
      m.val_micro_f1 = micro_f1(eval.labels, g.labels(), val_nodes);
      m.val_macro_f1 = macro_f1(eval.labels, g.labels(), val_nodes);
    }
    if (!test_nodes.empty()) {
      m.test_micro_f1 = micro_f1(eval.labels, g.labels(), test_nodes);
      m.test_macro_f1 = macro_f1(eval.labels, g.labels(), test_nodes);
    }
    m.val_loss = masked_nll_value(eval.probs, g, select_nodes);
    m.subgraph_edge_homophily = eval.subgraph_edge_homophily;

    const double select_f1 = micro_f1(eval.labels, g.labels(), select_nodes);
    // Patience runs only at the final temperature; earlier epochs are still exploring T.
    const bool annealing = cfg.method == Method::sgs && cfg.norm_mode != NormMode::sum && temp > cfg.t_min;
    const bool improved = st.best_epoch < 0 || select_f1 > st.best_val_f1 ||
                          (select_f1 == st.best_val_f1 && m.val_loss < st.best_val_loss);
    if (improved) {
      st.best = st.current;
      st.best_t = temp;
      st.best_epoch = epoch;
      st.best_val_f1 = select_f1;
      st.best_val_loss = m.val_loss;
      st.epochs_since_improvement = 0;
    } else if (!annealing) {
      ++st.epochs_since_improvement;
    }
    st.loss_history.push_back(m.loss.total);
    if (st.converged_epoch < 0 && detect_convergence(st.loss_history)) st.converged_epoch = epoch + 1;
    st.epoch = epoch + 1;
    res.metrics.push_back(m);
  }

  const InferenceResult fin = infer_ensemble(st, g, cfg, cfg.ensemble);
  RunSummary& s = res.summary;
  s.method = cfg.method;
  s.q = cfg.q;
  s.seed = cfg.seed;
  if (!test_nodes.empty()) {
    s.test_micro_f1 = micro_f1(fin.labels, g.labels(), test_nodes);
    s.test_macro_f1 = macro_f1(fin.labels, g.labels(), test_nodes);
  }
  s.val_micro_f1 = st.best_val_f1;
  s.best_t = st.best_t;
  s.best_epoch = st.best_epoch;
  s.epochs_run = st.epoch;
  // A run that never met the convergence test is censored at max_epochs.
  s.epochs_to_converge = st.converged_epoch > 0 ? st.converged_epoch : cfg.max_epochs;
  s.input_edge_homophily = edge_homophily(g);
  s.subgraph_edge_homophily = fin.subgraph_edge_homophily;
  return res;
}

TrainResult train_conditional(const Graph& g, RunConfig cfg, std::optional<ModelState> resume) {
  cfg.conditional = true;
  return train(g, cfg, std::move(resume));
}

InferenceResult infer_ensemble(const ModelState& state, const Graph& g, const RunConfig& cfg, int samples,
                               std::uint64_t stream) {
  if (!state.trained()) throw Error("inference needs a trained model state");
  check_compatible(state, g);
  if (samples < 1) throw Error("ensemble size must be at least 1");
  const std::vector<PartData> parts = prepare_parts(g, cfg);
  return run_inference(parts, g, state.best, cfg, state.best_t, samples, derive_seed(cfg.seed, {kFinalStream, stream}));
}

SparseSubgraph sample_sparse_subgraph(const ModelState& state, const Graph& g, const RunConfig& cfg, double q,
                                      std::uint64_t stream) {
  if (!state.trained()) throw Error("sparsification needs a trained model state");
  check_compatible(state, g);
  RunConfig c = cfg;
  c.q = q;
  const std::vector<PartData> parts = prepare_parts(g, c);
  std::vector<EdgeId> ids;
  std::vector<double> scores(g.num_edges(), 1.0);
  // Same streams as ensemble member 0 of infer_ensemble.
  const std::uint64_t stream_seed = derive_seed(c.seed, {kFinalStream, stream});
  for (std::size_t p = 0; p < parts.size(); ++p) {
    Rng rng = make_rng(stream_seed, {0, p});
    const SparseSubgraph sg = draw_part_subgraph(parts[p], state.best, c, state.best_t, rng);
    for (std::size_t i = 0; i < sg.edge_indices.size(); ++i) {
      const EdgeId ge = parts[p].global_edges[sg.edge_indices[i]];
      ids.push_back(ge);
      scores[ge] = sg.weights[i];
    }
  }
  std::sort(ids.begin(), ids.end());
  return build_subgraph(g, ids, scores);
}

void write_metrics_csv(const std::vector<EpochMetrics>& m, const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw Error("cannot write " + file.string());
  os << "epoch,loss_ce,loss_assor,loss_cons,loss_total,train_micro_f1,train_macro_f1,val_micro_f1,val_macro_f1,"
        "test_micro_f1,test_macro_f1,val_loss,subgraph_edge_homophily,temperature,encoder_updates\n";
  char buf[512];
  for (const EpochMetrics& e : m) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.10g,%.6f,%.6f,%d\n",
                  e.epoch, e.loss.ce, e.loss.assor, e.loss.cons, e.loss.total, e.train_micro_f1, e.train_macro_f1,
                  e.val_micro_f1, e.val_macro_f1, e.test_micro_f1, e.test_macro_f1, e.val_loss,
                  e.subgraph_edge_homophily, e.temperature, e.encoder_updates);
    os << buf;
  }
}

} // namespace gsparse
