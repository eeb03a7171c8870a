#pragma once

#include <vector>

#include "gsparse/graph.hpp"

namespace gsparse {

/// Degree-proportionate edge distribution, p(u,v) proportional to 1/d_u + 1/d_v,
/// indexed by canonical edge id.
std::vector<double> compute_prior(const Graph& g);

/// Rescales a non-negative vector to sum 1. Throws when the sum is not positive.
std::vector<double> normalized(std::vector<double> w);

} // namespace gsparse
