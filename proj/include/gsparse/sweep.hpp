#pragma once

#include <filesystem>
#include <vector>

#include "gsparse/generators.hpp"
#include "gsparse/trainer.hpp"

namespace gsparse {

/// One training run per (method, q, seed) on a fixed graph, in that nesting order.
std::vector<RunSummary> sweep_sparsity(const Graph& g, const RunConfig& base, const std::vector<Method>& methods,
                                       const std::vector<double>& qs, const std::vector<std::uint64_t>& seeds);

/// Header method,q,seed,test_micro_f1,test_macro_f1,epochs_to_converge,subgraph_edge_homophily.
void write_results_csv(const std::vector<RunSummary>& rows, const std::filesystem::path& file);

struct HeatmapCell {
  double h = 0.0;
  double q = 0.0;
  double median_test_micro_f1 = 0.0;
  double input_edge_homophily = 0.0;
};

/// For every target homophily, generates a graph with graph_opt (seeded per
/// h) and records the median test micro-F1 over seeds for every q.
std::vector<HeatmapCell> homophily_sparsity_grid(const std::vector<int>& labels, HomophilyGraphOptions graph_opt,
                                                 const RunConfig& base, const std::vector<double>& hs,
                                                 const std::vector<double>& qs,
                                                 const std::vector<std::uint64_t>& seeds);

/// Pivot table: one row per h, one column per q, cells hold the median F1.
void write_pivot_csv(const std::vector<HeatmapCell>& cells, const std::filesystem::path& file);

double median(std::vector<double> v);

} // namespace gsparse
