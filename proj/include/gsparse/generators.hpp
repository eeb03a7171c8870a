#pragma once

#include <cstdint>
#include <vector>

#include "gsparse/graph.hpp"

namespace gsparse {

/// Fractions of nodes tagged train and val; the remainder is test.
struct SplitFractions {
  double train = 0.2;
  double val = 0.4;
};

/// Random train/val/test assignment with exact counts floor(n * fraction).
std::vector<Split> random_split(std::size_t n, SplitFractions f, std::uint64_t seed);

/// n labels cycling through 0..num_classes-1 (balanced classes).
std::vector<int> balanced_labels(std::size_t n, int num_classes);

struct HomophilyGraphOptions {
  std::size_t degree = 10;   // edges emitted by each node
  double target_h = 0.5;
  Eigen::Index feature_dim = 8;
  double feature_noise = 1.0;  // std-dev around the one-hot class mean
  SplitFractions split{};
  std::uint64_t seed = 0;
};

/// Synthetic graph with controlled homophily. Every node emits ceil(d * h)
/// edges to uniformly chosen same-label nodes and d - ceil(d * h) edges to
/// uniformly chosen nodes of any label. Collisions (self-loops, repeated
/// pairs) are redrawn, so the result has exactly n * d edges. Features are
/// Gaussian around the one-hot direction of the node's class.
Graph gen_homophily_controlled(const std::vector<int>& labels, const HomophilyGraphOptions& opt);

struct MoonGraphOptions {
  std::size_t n_nodes = 150;
  double noise = 0.1;
  std::size_t k_nn = 3;
  double bridge_fraction = 0.68;
  SplitFractions split{0.3, 0.1};
  std::uint64_t seed = 0;
};

/// Two interleaved half-circles, one class each, with the 2-D positions as
/// node features. Each node is joined to its k_nn nearest neighbors on its
/// own moon; random cross-moon bridges are then added until they make up
/// bridge_fraction of all edges.
Graph gen_moon_graph(const MoonGraphOptions& opt);

} // namespace gsparse
