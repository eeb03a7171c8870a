#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gsparse/matrix.hpp"

namespace gsparse {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class Split : std::uint8_t { train, val, test };

const char* to_string(Split s);
Split parse_split(const std::string& s);

/// Undirected edge in canonical orientation (u < v).
struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable undirected graph with node features, labels and split tags.
///
/// Each undirected edge is stored once in the canonical edge list, sorted by
/// (u, v). The CSR adjacency is the symmetrization of that list: every edge
/// appears in the neighbor list of both endpoints, together with its canonical
/// edge id.
class Graph {
public:
  Graph() = default;

  /// Builds a graph from raw edge pairs. Reversed and repeated pairs collapse
  /// into one canonical edge; self-loops and out-of-range ids throw.
  Graph(std::size_t num_nodes, std::span<const std::pair<NodeId, NodeId>> raw_edges,
        Matrix features, std::vector<int> labels, std::vector<Split> split, int num_classes);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  int num_classes() const { return num_classes_; }
  Eigen::Index feature_dim() const { return features_.cols(); }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const std::uint32_t> csr_offsets() const { return offsets_; }
  std::span<const NodeId> csr_targets() const { return targets_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  /// Canonical edge ids aligned with neighbors(u).
  std::span<const EdgeId> incident_edges(NodeId u) const {
    return {edge_ids_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  const Matrix& features() const { return features_; }
  std::span<const int> labels() const { return labels_; }
  int label(NodeId u) const { return labels_[u]; }
  std::span<const Split> split() const { return split_; }

  std::vector<NodeId> nodes_in(Split s) const;

  /// Free-form provenance note (generator name and parameters).
  const std::string& description() const { return description_; }
  void set_description(std::string d) { description_ = std::move(d); }

private:
  std::size_t num_nodes_ = 0;
  int num_classes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<EdgeId> edge_ids_;
  Matrix features_;
  std::vector<int> labels_;
  std::vector<Split> split_;
  std::string description_;
};

struct HomophilyReport {
  double node_homophily = 0.0;
  double edge_homophily = 0.0;
  double adjusted_homophily = 0.0;
  bool is_heterophilic = false;
};

/// Mean over non-isolated nodes of the fraction of same-label neighbors.
/// Returns 0 when every node is isolated.
double node_homophily(const Graph& g);

/// Fraction of canonical edges whose endpoints share a label.
double edge_homophily(const Graph& g);

/// Chance-corrected edge homophily,
///   (H_e - sum_k D_k^2 / (2|E|)^2) / (1 - sum_k D_k^2 / (2|E|)^2),
/// with D_k the degree total of class k. Returns 0 when the denominator
/// vanishes (a single class carries all the degree).
double adjusted_homophily(const Graph& g);

constexpr double kHeterophilyThreshold = 0.5;

HomophilyReport homophily_report(const Graph& g);

/// Edge homophily restricted to a subset of canonical edge ids.
double subgraph_edge_homophily(const Graph& g, std::span<const EdgeId> edges);

/// Same as homophily_report, but computed on the subgraph (all nodes, the given edges).
HomophilyReport subgraph_homophily_report(const Graph& g, std::span<const EdgeId> edges);

} // namespace gsparse
