#include "gsparse/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "gsparse/error.hpp"
#include "gsparse/rng.hpp"

namespace gsparse {

namespace {

using PairSet = std::set<std::pair<NodeId, NodeId>>;

std::pair<NodeId, NodeId> canonical(NodeId a, NodeId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

} // namespace

std::vector<Split> random_split(std::size_t n, SplitFractions f, std::uint64_t seed) {
  if (f.train < 0 || f.val < 0 || f.train + f.val > 1.0 + 1e-12) throw Error("invalid split fractions");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, {0x5b1f}));
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::floor(f.train * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::floor(f.val * static_cast<double>(n)));
  std::vector<Split> out(n, Split::test);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train) out[order[i]] = Split::train;
    else if (i < n_train + n_val) out[order[i]] = Split::val;
  }
  return out;
}

std::vector<int> balanced_labels(std::size_t n, int num_classes) {
  if (num_classes < 1) throw Error("num_classes must be positive");
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % static_cast<std::size_t>(num_classes));
  return y;
}

Graph gen_homophily_controlled(const std::vector<int>& labels, const HomophilyGraphOptions& opt) {
  if (opt.target_h < 0.0 || opt.target_h > 1.0) throw Error("target_h must lie in [0,1]");
  if (labels.empty()) throw Error("no labels given");
  const std::size_t n = labels.size();
  const int num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  if (opt.feature_dim < num_classes) throw Error("feature_dim must be at least the number of classes");

  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(num_classes));
  for (NodeId i = 0; i < n; ++i) {
    if (labels[i] < 0) throw Error("negative label");
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (int c = 0; c < num_classes; ++c) {
    if (members[static_cast<std::size_t>(c)].size() < opt.degree + 1) {
      throw Error("class " + std::to_string(c) + " has " + std::to_string(members[static_cast<std::size_t>(c)].size()) +
                  " members, needs at least degree+1 = " + std::to_string(opt.degree + 1));
    }
  }
  if (n < opt.degree + 1) throw Error("graph too small for the requested degree");

  // The small epsilon keeps e.g. 10 * 0.7 = 7.000000000000001 from rounding up to 8.
  const auto same_count = static_cast<std::size_t>(
      std::ceil(static_cast<double>(opt.degree) * opt.target_h - 1e-9));

  Rng rng(derive_seed(opt.seed, {0xed6e}));
  PairSet seen;
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n * opt.degree);
  // Redraws are bounded; a node whose candidates are all used up is an error.
  auto draw = [&](NodeId u, const std::vector<NodeId>& pool) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const NodeId v = pool[pick(rng)];
      if (v == u) continue;
      if (seen.insert(canonical(u, v)).second) {
        edges.emplace_back(u, v);
        return;
      }
    }
    throw Error("could not find a distinct neighbor for node " + std::to_string(u) + "; class too small");
  };

  std::vector<NodeId> everyone(n);
  std::iota(everyone.begin(), everyone.end(), 0);
  for (NodeId u = 0; u < n; ++u) {
    const auto& own = members[static_cast<std::size_t>(labels[u])];
    for (std::size_t j = 0; j < same_count; ++j) draw(u, own);
    for (std::size_t j = same_count; j < opt.degree; ++j) draw(u, everyone);
  }

  Rng feat_rng(derive_seed(opt.seed, {0xfea7}));
  std::normal_distribution<double> noise(0.0, opt.feature_noise);
  Matrix x(static_cast<Eigen::Index>(n), opt.feature_dim);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = noise(feat_rng);
    x(i, labels[static_cast<std::size_t>(i)]) += 1.0;
  }

  Graph g(n, edges, std::move(x), labels, random_split(n, opt.split, opt.seed), num_classes);
  std::ostringstream desc;
  desc << "homophily_controlled degree=" << opt.degree << " target_h=" << opt.target_h
       << " feature_dim=" << opt.feature_dim << " features=onehot_gaussian(std=" << opt.feature_noise
       << ") seed=" << opt.seed;
  g.set_description(desc.str());
  return g;
}

Graph gen_moon_graph(const MoonGraphOptions& opt) {
  if (opt.n_nodes == 0 || opt.n_nodes % 2 != 0) throw Error("moon graph needs an even, positive node count");
  if (opt.k_nn < 2) throw Error("k_nn must be at least 2");
  if (!(opt.bridge_fraction >= 0.0 && opt.bridge_fraction <= 1.0)) {
    throw Error("bridge_fraction must lie in [0,1]");
  }
  const std::size_t half = opt.n_nodes / 2;
  if (opt.k_nn >= half) throw Error("k_nn must be smaller than the moon size");

  Rng rng(derive_seed(opt.seed, {0x3007}));
  std::normal_distribution<double> jitter(0.0, opt.noise);
  Matrix x(static_cast<Eigen::Index>(opt.n_nodes), 2);
  std::vector<int> labels(opt.n_nodes);
  const double pi = std::acos(-1.0);
  for (std::size_t i = 0; i < half; ++i) {
    const double t = half == 1 ? 0.0 : pi * static_cast<double>(i) / static_cast<double>(half - 1);
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(half + i);
    x(a, 0) = std::cos(t) + jitter(rng);
    x(a, 1) = std::sin(t) + jitter(rng);
    x(b, 0) = 1.0 - std::cos(t) + jitter(rng);
    x(b, 1) = 0.5 - std::sin(t) + jitter(rng);
    labels[i] = 0;
    labels[half + i] = 1;
  }

  PairSet seen;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int moon = 0; moon < 2; ++moon) {
    const std::size_t lo = moon * half;
    for (std::size_t i = lo; i < lo + half; ++i) {
      std::vector<std::pair<double, NodeId>> dist;
      for (std::size_t j = lo; j < lo + half; ++j) {
        if (j == i) continue;
        const double d = (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).squaredNorm();
        dist.emplace_back(d, static_cast<NodeId>(j));
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(opt.k_nn), dist.end());
      for (std::size_t k = 0; k < opt.k_nn; ++k) {
        const auto p = canonical(static_cast<NodeId>(i), dist[k].second);
        if (seen.insert(p).second) edges.push_back(p);
      }
    }
  }

  const double intra = static_cast<double>(edges.size());
  std::size_t cross_target = 0;
  const std::size_t max_cross = half * half;
  if (opt.bridge_fraction >= 1.0) {
    cross_target = max_cross;
  } else {
    cross_target = static_cast<std::size_t>(
        std::ceil(opt.bridge_fraction * intra / (1.0 - opt.bridge_fraction) - 1e-9));
    cross_target = std::min(cross_target, max_cross);
  }
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(half - 1));
  std::size_t cross = 0;
  while (cross < cross_target) {
    const NodeId a = pick(rng);
    const NodeId b = static_cast<NodeId>(half) + pick(rng);
    if (seen.insert(canonical(a, b)).second) {
      edges.emplace_back(a, b);
      ++cross;
    }
  }

  Graph g(opt.n_nodes, edges, std::move(x), std::move(labels), random_split(opt.n_nodes, opt.split, opt.seed), 2);
  std::ostringstream desc;
  desc << "moon n_nodes=" << opt.n_nodes << " noise=" << opt.noise << " k_nn=" << opt.k_nn
       << " bridge_fraction=" << opt.bridge_fraction << " seed=" << opt.seed;
  g.set_description(desc.str());
  return g;
}

} // namespace gsparse
