#pragma once

#include <string>
#include <vector>

#include "gsparse/graph.hpp"

namespace gsparse {

enum class FixedKind { random, degree_weighted, effective_resistance };

const char* to_string(FixedKind k);

/// Uniform 1 / |E|.
std::vector<double> random_distribution(const Graph& g);

/// Proportional to 1/d_u + 1/d_v; identical to compute_prior.
std::vector<double> degree_weighted_distribution(const Graph& g);

constexpr std::size_t kExactResistanceCap = 3000;

/// Effective resistance of every canonical edge, (e_u - e_v)^T L^+ (e_u - e_v),
/// from a dense eigendecomposition of the Laplacian. Throws above max_nodes.
std::vector<double> effective_resistances(const Graph& g, std::size_t max_nodes = kExactResistanceCap);

/// Effective resistances normalized to a distribution.
std::vector<double> effective_resistance_distribution(const Graph& g, std::size_t max_nodes = kExactResistanceCap);

std::vector<double> fixed_distribution(const Graph& g, FixedKind kind);

} // namespace gsparse
