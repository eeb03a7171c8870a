#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "gsparse/graph.hpp"
#include "gsparse/rng.hpp"

namespace gsparse {

/// Number of edges kept at sparsity percent q, floor(q * m / 100).
std::size_t edges_to_keep(double q, std::size_t num_edges);

/// lambda * p + (1 - lambda) * prior. Both inputs must be distributions of equal length.
std::vector<double> augment_with_prior(std::span<const double> p, std::span<const double> prior, double lambda);

/// k distinct indices drawn one at a time with probability proportional to
/// dist among the indices not yet drawn. Returned in ascending order.
std::vector<EdgeId> sample_multinomial_k(std::span<const double> dist, std::size_t k, Rng& rng);

/// k independent draws with replacement, in draw order.
std::vector<EdgeId> sample_with_replacement(std::span<const double> dist, std::size_t k, Rng& rng);

/// Indices of the k largest keys (log w + g) / T with g ~ Gumbel(0, 1);
/// add_noise = false sets g = 0. Returned in ascending order; ties favor the
/// lower index.
std::vector<EdgeId> sample_gumbel_topk(std::span<const double> raw_scores, std::size_t k, double temperature,
                                       Rng& rng, bool add_noise = true);

/// Edge subset of a graph together with the raw scores of the kept edges.
struct SparseSubgraph {
  std::size_t num_nodes = 0;
  std::vector<EdgeId> edge_indices;
  std::vector<std::pair<NodeId, NodeId>> endpoints;  // aligned with edge_indices
  std::vector<double> weights;                       // raw_scores[edge_indices[i]]
};

/// Throws on an empty selection, a repeated index or an index out of range.
SparseSubgraph build_subgraph(const Graph& g, std::span<const EdgeId> edge_indices, std::span<const double> raw_scores);

/// Writes "u,v,weight" rows without a header, readable by read_edge_csv.
void write_subgraph_csv(const SparseSubgraph& sg, const std::filesystem::path& file);

} // namespace gsparse
