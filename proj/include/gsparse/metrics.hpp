#pragma once

#include <span>

#include "gsparse/graph.hpp"

namespace gsparse {

/// Accuracy over the masked nodes. Throws on an empty mask.
double micro_f1(std::span<const int> pred, std::span<const int> truth, std::span<const NodeId> mask);

/// Unweighted mean of per-class F1 over the classes present in the masked
/// truth or predictions. Throws on an empty mask.
double macro_f1(std::span<const int> pred, std::span<const int> truth, std::span<const NodeId> mask);

} // namespace gsparse
