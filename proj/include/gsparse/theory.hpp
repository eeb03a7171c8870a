#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gsparse/graph.hpp"
#include "gsparse/matrix.hpp"
#include "gsparse/rng.hpp"

namespace gsparse {

/// Outcome of checking a Monte-Carlo mean against analytic bounds.
/// holds <=> lower <= mean + 4 stderr and mean <= upper + 4 stderr.
struct BoundCheckReport {
  std::string name;
  double empirical_mean = 0.0;
  double stderr_mean = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double epsilon_used = 0.0;
  double set_overlap_mean = 0.0;  // reported only, never asserted
  double beta = 0.0;              // embedding-norm bound, GCN check only
  double alpha = 0.0;             // weight-norm bound, GCN check only
  std::size_t trials = 0;
  bool holds = false;
};

constexpr double kStatSlack = 4.0;

struct OverlapStats {
  double mean = 0.0;          // positional matches a_i == b_i
  double stderr_mean = 0.0;
  double set_mean = 0.0;      // distinct edges drawn by both
  double min = 0.0;
  double max = 0.0;
};

/// Two ordered k-draws with replacement per trial, one from each distribution.
OverlapStats expected_common_edges_mc(std::span<const double> p_star, std::span<const double> p_tilde, std::size_t k,
                                      std::size_t trials, std::uint64_t seed);

/// max_j |p*_j - p~_j|.
double sup_gap(std::span<const double> p_star, std::span<const double> p_tilde);

/// sum_j max(0, p*_j + p~_j - eps)^2 / 4.
double overlap_mass(std::span<const double> p_star, std::span<const double> p_tilde, double eps);

/// Lower bound k * overlap_mass, upper bound k * (1 - |p* - p~|_1 / 2).
BoundCheckReport check_common_edge_bounds(std::span<const double> p_star, std::span<const double> p_tilde,
                                          std::size_t k, std::size_t trials, std::uint64_t seed);

/// Spectral norm of the difference of the two sampled 0/1 adjacency
/// matrices against sqrt(2k(1 - overlap_mass)). The distributions index the
/// canonical edges of g.
BoundCheckReport check_adjacency_error(const Graph& g, std::span<const double> p_star, std::span<const double> p_tilde,
                                       std::size_t k, std::size_t trials, std::uint64_t seed);

struct GcnBoundOptions {
  int depth = 16;
  Eigen::Index hidden = 8;
  double alpha = 0.9;        // spectral norm every layer weight is rescaled to
  bool same_stream = false;  // both samplers share one random stream
};

/// Final-layer embedding gap of a ReLU GCN with shared weights run on the
/// two sampled subgraphs, against (beta / (1 - alpha)) sqrt(2k(1 - overlap_mass))
/// with beta the largest embedding norm seen over all trials and layers.
BoundCheckReport check_gcn_embedding_error(const Graph& g, std::span<const double> p_star,
                                           std::span<const double> p_tilde, std::size_t k, std::size_t trials,
                                           std::uint64_t seed, const GcnBoundOptions& opt = {});

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Symmetric Dirichlet(concentration) draw of length n.
std::vector<double> dirichlet(std::size_t n, double concentration, Rng& rng);

/// Simple graph with exactly num_edges uniformly random edges, Gaussian
/// features and a single class; used as the edge universe for bound checks.
Graph random_edge_graph(std::size_t num_nodes, std::size_t num_edges, Eigen::Index feature_dim, std::uint64_t seed);

struct TheorySuiteOptions {
  std::size_t nodes = 30;
  std::size_t edges = 50;
  std::size_t k = 10;
  std::size_t pairs = 100;
  std::size_t overlap_trials = 100000;
  std::size_t matrix_trials = 1000;
  double concentration = 1.0;
  int depth = 16;
  double alpha = 0.9;
  Eigen::Index hidden = 8;
  Eigen::Index feature_dim = 8;
  std::uint64_t seed = 0;
};

/// Matched uniform and matched one-hot distributions, then `pairs` random
/// Dirichlet pairs; each case runs all three checks. Report names are
/// "<case>/<check>".
std::vector<BoundCheckReport> run_theory_suite(const TheorySuiteOptions& opt);

std::string report_to_json(const std::vector<BoundCheckReport>& reports);

} // namespace gsparse
