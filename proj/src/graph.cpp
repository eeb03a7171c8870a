#include "gsparse/graph.hpp"

#include <algorithm>
#include <cmath>

#include "gsparse/error.hpp"

namespace gsparse {

const char* to_string(Split s) {
  switch (s) {
  case Split::train: return "train";
  case Split::val: return "val";
  case Split::test: return "test";
  }
  return "?";
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw Error("unknown split tag '" + s + "'");
}

Graph::Graph(std::size_t num_nodes, std::span<const std::pair<NodeId, NodeId>> raw_edges,
             Matrix features, std::vector<int> labels, std::vector<Split> split, int num_classes)
    : num_nodes_(num_nodes), num_classes_(num_classes), features_(std::move(features)),
      labels_(std::move(labels)), split_(std::move(split)) {
  if (num_classes_ < 1) throw Error("graph needs at least one class");
  if (static_cast<std::size_t>(features_.rows()) != num_nodes_) {
    throw Error("feature matrix has " + std::to_string(features_.rows()) + " rows, expected " +
                std::to_string(num_nodes_));
  }
  if (labels_.size() != num_nodes_) throw Error("label count does not match node count");
  if (split_.size() != num_nodes_) throw Error("split count does not match node count");
  if (!features_.allFinite()) throw Error("non-finite feature value");
  for (std::size_t i = 0; i < num_nodes_; ++i) {
    if (labels_[i] < 0 || labels_[i] >= num_classes_) {
      throw Error("label " + std::to_string(labels_[i]) + " of node " + std::to_string(i) +
                  " outside [0," + std::to_string(num_classes_) + ")");
    }
  }

  edges_.reserve(raw_edges.size());
  for (auto [a, b] : raw_edges) {
    if (a >= num_nodes_ || b >= num_nodes_) {
      throw Error("edge (" + std::to_string(a) + "," + std::to_string(b) + ") references node >= " +
                  std::to_string(num_nodes_));
    }
    if (a == b) throw Error("self-loop on node " + std::to_string(a) + " rejected");
    edges_.push_back(a < b ? Edge{a, b} : Edge{b, a});
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  std::vector<std::uint32_t> deg(num_nodes_, 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(num_nodes_ + 1, 0);
  for (std::size_t i = 0; i < num_nodes_; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  targets_.resize(offsets_.back());
  edge_ids_.resize(offsets_.back());
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling in edge order leaves every
  // neighbor list sorted ascending.
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    targets_[cursor[e.u]] = e.v;
    edge_ids_[cursor[e.u]++] = id;
  }
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    targets_[cursor[e.v]] = e.u;
    edge_ids_[cursor[e.v]++] = id;
  }
  for (std::size_t i = 0; i < num_nodes_; ++i) {
    // The second pass appended lower-id neighbors after higher-id ones.
    auto b = offsets_[i], e = offsets_[i + 1];
    std::vector<std::pair<NodeId, EdgeId>> tmp;
    tmp.reserve(e - b);
    for (auto k = b; k < e; ++k) tmp.emplace_back(targets_[k], edge_ids_[k]);
    std::sort(tmp.begin(), tmp.end());
    for (auto k = b; k < e; ++k) {
      targets_[k] = tmp[k - b].first;
      edge_ids_[k] = tmp[k - b].second;
    }
  }
}

std::vector<NodeId> Graph::nodes_in(Split s) const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < num_nodes_; ++i) {
    if (split_[i] == s) out.push_back(i);
  }
  return out;
}

namespace {

struct EdgeStats {
  std::size_t edges = 0;
  std::size_t same = 0;
};

EdgeStats count_same(const Graph& g, std::span<const EdgeId> ids) {
  EdgeStats s;
  for (EdgeId id : ids) {
    if (id >= g.num_edges()) throw Error("edge index " + std::to_string(id) + " out of range");
    const Edge& e = g.edge(id);
    s.same += g.label(e.u) == g.label(e.v);
    ++s.edges;
  }
  return s;
}

std::vector<EdgeId> all_edge_ids(const Graph& g) {
  std::vector<EdgeId> ids(g.num_edges());
  for (EdgeId i = 0; i < ids.size(); ++i) ids[i] = i;
  return ids;
}

double node_homophily_of(const Graph& g, std::span<const EdgeId> ids) {
  std::vector<std::size_t> deg(g.num_nodes(), 0), same(g.num_nodes(), 0);
  for (EdgeId id : ids) {
    const Edge& e = g.edge(id);
    ++deg[e.u];
    ++deg[e.v];
    if (g.label(e.u) == g.label(e.v)) {
      ++same[e.u];
      ++same[e.v];
    }
  }
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    if (deg[i] == 0) continue;
    total += static_cast<double>(same[i]) / static_cast<double>(deg[i]);
    ++counted;
  }
  return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

double adjusted_homophily_of(const Graph& g, std::span<const EdgeId> ids) {
  const EdgeStats s = count_same(g, ids);
  if (s.edges == 0) throw Error("adjusted homophily of an empty edge set");
  std::vector<double> class_degree(static_cast<std::size_t>(g.num_classes()), 0.0);
  for (EdgeId id : ids) {
    const Edge& e = g.edge(id);
    class_degree[static_cast<std::size_t>(g.label(e.u))] += 1.0;
    class_degree[static_cast<std::size_t>(g.label(e.v))] += 1.0;
  }
  const double two_m = 2.0 * static_cast<double>(s.edges);
  double chance = 0.0;
  for (double d : class_degree) chance += (d / two_m) * (d / two_m);
  const double denom = 1.0 - chance;
  if (std::abs(denom) < 1e-12) return 0.0;
  const double he = static_cast<double>(s.same) / static_cast<double>(s.edges);
  return (he - chance) / denom;
}

HomophilyReport report_of(const Graph& g, std::span<const EdgeId> ids) {
  HomophilyReport r;
  r.node_homophily = node_homophily_of(g, ids);
  r.edge_homophily = subgraph_edge_homophily(g, ids);
  r.adjusted_homophily = adjusted_homophily_of(g, ids);
  r.is_heterophilic = r.adjusted_homophily <= kHeterophilyThreshold;
  return r;
}

} // namespace

double node_homophily(const Graph& g) {
  const auto ids = all_edge_ids(g);
  return node_homophily_of(g, ids);
}

double edge_homophily(const Graph& g) {
  if (g.num_edges() == 0) throw Error("edge homophily of a graph without edges");
  const auto ids = all_edge_ids(g);
  return subgraph_edge_homophily(g, ids);
}

double adjusted_homophily(const Graph& g) {
  const auto ids = all_edge_ids(g);
  return adjusted_homophily_of(g, ids);
}

HomophilyReport homophily_report(const Graph& g) {
  const auto ids = all_edge_ids(g);
  return report_of(g, ids);
}

double subgraph_edge_homophily(const Graph& g, std::span<const EdgeId> edges) {
  const EdgeStats s = count_same(g, edges);
  if (s.edges == 0) throw Error("edge homophily of an empty edge subset");
  return static_cast<double>(s.same) / static_cast<double>(s.edges);
}

HomophilyReport subgraph_homophily_report(const Graph& g, std::span<const EdgeId> edges) {
  return report_of(g, edges);
}

} // namespace gsparse
