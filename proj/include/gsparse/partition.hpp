#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gsparse/graph.hpp"

namespace gsparse {

/// One batch of the partition. nodes lists the part's own nodes first
/// (num_core of them), then halo nodes: endpoints in other parts of cut
/// edges owned here. A node's local id is its position in nodes.
struct Part {
  std::vector<NodeId> nodes;
  std::size_t num_core = 0;
  std::vector<EdgeId> edges;  // owned canonical edge ids, ascending
  std::size_t cut_edges = 0;  // owned edges with a halo endpoint
  std::size_t induced_edges() const { return edges.size() - cut_edges; }
};

struct Partition {
  std::vector<Part> parts;
  std::vector<std::uint32_t> node_part;  // part id of every node
  std::size_t cut_edges() const;
};

/// Edge-locality partition into ceil(|E| / max_edges_per_part) parts grown
/// by seeded BFS. Every node belongs to exactly one part. An edge inside a
/// part is owned by it; a cut edge is owned by the part of its lower-id
/// endpoint. A part stops growing at ceil(|E| / n) induced edges, so a part
/// overshoots the target by at most the degree of its last node. The last
/// part takes all remaining nodes and empty parts are dropped.
Partition partition_graph(const Graph& g, std::size_t max_edges_per_part, std::uint64_t seed);

/// Writes "node_id,part_id" rows.
void write_partition_csv(const Partition& p, const std::filesystem::path& file);

} // namespace gsparse
