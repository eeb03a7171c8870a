#include "gsparse/rng.hpp"

#include <cmath>

namespace gsparse {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> stream) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t s : stream) {
    h = splitmix64(h ^ splitmix64(s + 0x632be59bd9b4e019ULL));
  }
  return h;
}

double uniform_open01(Rng& rng) {
  // 53 random bits, shifted by half a ulp so 0 is never produced.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double gumbel(Rng& rng) { return -std::log(-std::log(uniform_open01(rng))); }

Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = (2.0 * uniform_open01(rng) - 1.0) * a;
  }
  return m;
}

} // namespace gsparse
