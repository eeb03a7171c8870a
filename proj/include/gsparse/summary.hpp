#pragma once

#include <string>

#include "gsparse/graph.hpp"
#include "gsparse/trainer.hpp"

namespace gsparse {

constexpr int kSummarySchemaVersion = 1;

/// summary.json body: schema_version plus every RunSummary field, keys sorted.
std::string summary_to_json(const RunSummary& s);

std::string homophily_to_json(const HomophilyReport& r, std::size_t num_edges);

} // namespace gsparse
