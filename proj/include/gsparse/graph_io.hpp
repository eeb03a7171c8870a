#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "gsparse/graph.hpp"

namespace gsparse {

/// Reads a graph directory: meta.json, edges.csv, features.csv, labels.csv,
/// splits.csv. Counts in meta.json are authoritative; every other file is
/// checked against them.
Graph load_graph(const std::filesystem::path& dir);

/// Writes the directory layout read by load_graph. Reals use 17 significant
/// digits so a reload reproduces them exactly.
void save_graph(const Graph& g, const std::filesystem::path& dir);

struct EdgeRow {
  NodeId u;
  NodeId v;
  double weight;  // 1 when the file has only two columns
};

/// Reads "u,v" or "u,v,weight" rows, checking ids against num_nodes.
std::vector<EdgeRow> read_edge_csv(const std::filesystem::path& file, std::size_t num_nodes);

} // namespace gsparse
