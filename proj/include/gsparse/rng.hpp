#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "gsparse/matrix.hpp"

namespace gsparse {

using Rng = std::mt19937_64;

/// Derives an independent seed for a sub-stream (part index, epoch, purpose...)
/// from a master seed. Same inputs always give the same seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> stream);

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> stream) {
  return Rng(derive_seed(master, stream));
}

/// Uniform double strictly inside (0, 1).
double uniform_open01(Rng& rng);

/// Standard Gumbel(0, 1) draw, -log(-log(U)).
double gumbel(Rng& rng);

/// Glorot/Xavier uniform initialization, U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng);

} // namespace gsparse
