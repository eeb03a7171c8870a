#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gsparse/adam.hpp"
#include "gsparse/edge_encoder.hpp"
#include "gsparse/gcn.hpp"
#include "gsparse/graph.hpp"
#include "gsparse/losses.hpp"

namespace gsparse {

/// sgs learns the edge distribution; the others train the GCN alone on
/// unit-weight subgraphs drawn from a fixed distribution (full keeps every edge).
enum class Method { sgs, full, random, degree, er };

const char* to_string(Method m);
Method parse_method(const std::string& s);

struct RunConfig {
  Method method = Method::sgs;
  double q = 20.0;
  Eigen::Index hidden = 256;
  int layers = 2;
  double lr = 0.001;
  double dropout = 0.2;
  int max_epochs = 500;
  double lambda = 0.5;
  LossWeights alpha{};
  bool assor_one_sided = false;
  Reduction reduction = Reduction::mean;
  double t0 = 1.0;
  double t_min = 0.1;
  NormMode norm_mode = NormMode::softmax_temp;
  std::size_t edge_cap = 500000;
  int ensemble = 10;
  bool conditional = false;
  int patience = 50;  // counted only once the temperature has reached t_min
  bool stop_on_convergence = false;
  bool gnn_bias = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ModelParams {
  EdgeEncoderParams encoder;
  GnnParams gnn;
};

/// Everything needed to resume a run: live parameters with their optimizer
/// moments, the best-validation snapshot, and the early-stopping bookkeeping.
struct ModelState {
  ModelParams current;
  ModelParams best;
  AdamState adam_encoder;
  AdamState adam_gnn;
  std::size_t num_nodes = 0;  // node count of the graph the state was trained on
  int epoch = 0;               // epochs completed
  int best_epoch = -1;
  double best_t = 1.0;
  double best_val_f1 = 0.0;
  double best_val_loss = 0.0;
  int epochs_since_improvement = 0;
  int converged_epoch = -1;  // first epoch count meeting the convergence rule
  std::vector<double> loss_history;

  bool trained() const { return best_epoch >= 0; }
};

struct EpochMetrics {
  int epoch = 0;
  LossBreakdown loss;
  double train_micro_f1 = 0.0, train_macro_f1 = 0.0;
  double val_micro_f1 = 0.0, val_macro_f1 = 0.0;
  double test_micro_f1 = 0.0, test_macro_f1 = 0.0;
  double val_loss = 0.0;
  double subgraph_edge_homophily = 0.0;
  double temperature = 0.0;
  int encoder_updates = 0;  // parts whose encoder took a step this epoch
};

struct InferenceResult {
  Matrix probs;
  std::vector<int> labels;
  double subgraph_edge_homophily = 0.0;  // mean over the sampled subgraphs
};

struct RunSummary {
  Method method = Method::sgs;
  double q = 0.0;
  std::uint64_t seed = 0;
  double test_micro_f1 = 0.0;
  double test_macro_f1 = 0.0;
  double val_micro_f1 = 0.0;
  double best_t = 0.0;
  int best_epoch = 0;
  int epochs_run = 0;
  int epochs_to_converge = 0;
  double input_edge_homophily = 0.0;
  double subgraph_edge_homophily = 0.0;
};

struct TrainResult {
  ModelState state;
  std::vector<EpochMetrics> metrics;
  RunSummary summary;
};

/// Initial parameters for a graph, seeded from cfg.seed.
ModelState init_state(const Graph& g, const RunConfig& cfg);

/// Trains until max_epochs, early stopping, or convergence when requested.
/// With cfg.conditional the encoder only learns on parts where the learned
/// subgraph's training micro-F1 is at least that of a prior-sampled one.
/// resume continues a saved state; the result matches an uninterrupted run.
/// Throws DivergenceError on a non-finite loss.
TrainResult train(const Graph& g, const RunConfig& cfg, std::optional<ModelState> resume = std::nullopt);

/// Same as train with cfg.conditional forced on.
TrainResult train_conditional(const Graph& g, RunConfig cfg, std::optional<ModelState> resume = std::nullopt);

/// Averages the class probabilities of `samples` subgraphs drawn at the best
/// temperature with the best-validation parameters.
InferenceResult infer_ensemble(const ModelState& state, const Graph& g, const RunConfig& cfg, int samples,
                               std::uint64_t stream = 0);

/// One subgraph of the whole graph drawn at the best temperature; with q = cfg.q it is
/// the subgraph behind ensemble member 0 of infer_ensemble on the same stream.
SparseSubgraph sample_sparse_subgraph(const ModelState& state, const Graph& g, const RunConfig& cfg, double q,
                                      std::uint64_t stream = 0);

/// True iff at least five losses exist and the population standard deviation
/// of the last five is at most 1e-3.
bool detect_convergence(std::span<const double> losses);

void write_metrics_csv(const std::vector<EpochMetrics>& m, const std::filesystem::path& file);

} // namespace gsparse
