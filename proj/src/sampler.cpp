#include "gsparse/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "gsparse/error.hpp"

namespace gsparse {

namespace {

constexpr double kSumTol = 1e-9;

void require_distribution(std::span<const double> p, const char* what) {
  double s = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(std::string(what) + " has a negative or non-finite entry");
    s += x;
  }
  if (std::abs(s - 1.0) > kSumTol) throw Error(std::string(what) + " does not sum to 1");
}

// Binary indexed tree over non-negative weights supporting point updates and
// inverse-prefix search.
class SumTree {
public:
  explicit SumTree(std::span<const double> w) : n_(w.size()), tree_(w.size() + 1, 0.0), w_(w.begin(), w.end()) {
    for (std::size_t i = 0; i < n_; ++i) {
      tree_[i + 1] += w_[i];
      const std::size_t j = i + 1 + ((i + 1) & (~(i + 1) + 1));
      if (j <= n_) tree_[j] += tree_[i + 1];
    }
    step_ = 1;
    while (step_ * 2 <= n_) step_ *= 2;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t i = n_; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

  void zero(std::size_t idx) {
    const double d = -w_[idx];
    w_[idx] = 0.0;
    for (std::size_t i = idx + 1; i <= n_; i += i & (~i + 1)) tree_[i] += d;
  }

  // Smallest index whose inclusive prefix sum exceeds u; always a positive-weight index.
  std::size_t find(double u) const {
    std::size_t pos = 0;
    for (std::size_t s = step_; s > 0; s >>= 1) {
      if (pos + s <= n_ && tree_[pos + s] <= u) {
        pos += s;
        u -= tree_[pos];
      }
    }
    std::size_t idx = std::min(pos, n_ - 1);
    // Rounding can leave the search on a removed entry; move to the nearest live one.
    if (w_[idx] <= 0.0) {
      std::size_t hi = idx;
      while (hi < n_ && w_[hi] <= 0.0) ++hi;
      if (hi < n_) return hi;
      while (idx > 0 && w_[idx] <= 0.0) --idx;
    }
    return idx;
  }

private:
  std::size_t n_;
  std::size_t step_;
  std::vector<double> tree_;
  std::vector<double> w_;
};

} // namespace

std::size_t edges_to_keep(double q, std::size_t num_edges) {
  if (!(q > 0.0) || q > 100.0) throw Error("sparsity percent q must lie in (0, 100]");
  // Tolerance keeps values such as 0.29 * 100 from rounding down a whole edge.
  return static_cast<std::size_t>(std::floor(q * static_cast<double>(num_edges) / 100.0 + 1e-9));
}

std::vector<double> augment_with_prior(std::span<const double> p, std::span<const double> prior, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must lie in [0, 1]");
  if (p.size() != prior.size()) throw Error("augment_with_prior: length mismatch");
  require_distribution(p, "learned distribution");
  require_distribution(prior, "prior distribution");
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = lambda * p[i] + (1.0 - lambda) * prior[i];
  return out;
}

std::vector<EdgeId> sample_multinomial_k(std::span<const double> dist, std::size_t k, Rng& rng) {
  std::size_t support = 0;
  for (double x : dist) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error("sampling distribution has a negative or non-finite entry");
    support += x > 0.0;
  }
  if (k > support) {
    throw Error("cannot draw " + std::to_string(k) + " distinct edges from a support of " + std::to_string(support));
  }
  std::vector<EdgeId> out;
  out.reserve(k);
  if (k == support) {
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] > 0.0) out.push_back(static_cast<EdgeId>(i));
    }
    return out;
  }
  SumTree tree(dist);
  for (std::size_t t = 0; t < k; ++t) {
    const double u = uniform_open01(rng) * tree.total();
    const std::size_t idx = tree.find(u);
    out.push_back(static_cast<EdgeId>(idx));
    tree.zero(idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> sample_with_replacement(std::span<const double> dist, std::size_t k, Rng& rng) {
  if (dist.empty()) throw Error("sampling from an empty distribution");
  std::discrete_distribution<std::size_t> d(dist.begin(), dist.end());
  std::vector<EdgeId> out(k);
  for (auto& e : out) e = static_cast<EdgeId>(d(rng));
  return out;
}

std::vector<EdgeId> sample_gumbel_topk(std::span<const double> raw_scores, std::size_t k, double temperature,
                                       Rng& rng, bool add_noise) {
  if (!(temperature > 0.0)) throw Error("temperature must be positive");
  if (k > raw_scores.size()) throw Error("top-k larger than the edge set");
  std::vector<double> key(raw_scores.size());
  for (std::size_t i = 0; i < raw_scores.size(); ++i) {
    const double g = add_noise ? gumbel(rng) : 0.0;
    key[i] = (std::log(raw_scores[i]) + g) / temperature;
  }
  std::vector<EdgeId> idx(raw_scores.size());
  std::iota(idx.begin(), idx.end(), EdgeId{0});
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](EdgeId a, EdgeId b) { return key[a] != key[b] ? key[a] > key[b] : a < b; });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

SparseSubgraph build_subgraph(const Graph& g, std::span<const EdgeId> edge_indices, std::span<const double> raw_scores) {
  if (edge_indices.empty()) throw Error("a sparse subgraph needs at least one edge");
  if (raw_scores.size() != g.num_edges()) throw Error("build_subgraph: score count does not match edge count");
  std::vector<char> seen(g.num_edges(), 0);
  SparseSubgraph sg;
  sg.num_nodes = g.num_nodes();
  for (EdgeId e : edge_indices) {
    if (e >= g.num_edges()) throw Error("edge index " + std::to_string(e) + " out of range");
    if (seen[e]) throw Error("edge index " + std::to_string(e) + " selected twice");
    seen[e] = 1;
    sg.edge_indices.push_back(e);
    sg.endpoints.emplace_back(g.edge(e).u, g.edge(e).v);
    sg.weights.push_back(raw_scores[e]);
  }
  return sg;
}

void write_subgraph_csv(const SparseSubgraph& sg, const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw Error("cannot write " + file.string());
  char buf[64];
  for (std::size_t i = 0; i < sg.endpoints.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", sg.weights[i]);
    os << sg.endpoints[i].first << ',' << sg.endpoints[i].second << ',' << buf << '\n';
  }
}

} // namespace gsparse
