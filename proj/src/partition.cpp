#include "gsparse/partition.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>

#include "gsparse/error.hpp"
#include "gsparse/rng.hpp"

namespace gsparse {

namespace {
constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();
}

std::size_t Partition::cut_edges() const {
  std::size_t c = 0;
  for (const Part& p : parts) c += p.cut_edges;
  return c;
}

Partition partition_graph(const Graph& g, std::size_t max_edges_per_part, std::uint64_t seed) {
  if (max_edges_per_part < 1) throw Error("max_edges_per_part must be at least 1");
  const std::size_t n_nodes = g.num_nodes();
  const std::size_t m = g.num_edges();
  const std::size_t n_parts = std::max<std::size_t>(1, (m + max_edges_per_part - 1) / max_edges_per_part);

  Partition out;
  out.node_part.assign(n_nodes, kUnassigned);

  if (n_parts == 1) {
    Part p;
    p.nodes.resize(n_nodes);
    std::iota(p.nodes.begin(), p.nodes.end(), NodeId{0});
    p.num_core = n_nodes;
    p.edges.resize(m);
    std::iota(p.edges.begin(), p.edges.end(), EdgeId{0});
    out.parts.push_back(std::move(p));
    std::fill(out.node_part.begin(), out.node_part.end(), 0u);
    return out;
  }

  const std::size_t target = (m + n_parts - 1) / n_parts;
  Rng rng = make_rng(seed, {0x5041525431ull});
  std::vector<NodeId> root_order(n_nodes);
  std::iota(root_order.begin(), root_order.end(), NodeId{0});
  std::shuffle(root_order.begin(), root_order.end(), rng);
  std::size_t root_cursor = 0;
  std::size_t assigned = 0;

  std::vector<std::vector<NodeId>> members;
  for (std::uint32_t pid = 0; pid < n_parts && assigned < n_nodes; ++pid) {
    const bool last = pid + 1 == n_parts;
    std::vector<NodeId> core;
    std::deque<NodeId> queue;
    std::size_t induced = 0;
    while (assigned < n_nodes && (last || induced < target)) {
      NodeId x;
      if (!queue.empty()) {
        x = queue.front();
        queue.pop_front();
        if (out.node_part[x] != kUnassigned) continue;
      } else {
        while (out.node_part[root_order[root_cursor]] != kUnassigned) ++root_cursor;
        x = root_order[root_cursor];
      }
      out.node_part[x] = pid;
      ++assigned;
      core.push_back(x);
      for (NodeId y : g.neighbors(x)) {
        if (out.node_part[y] == pid) {
          ++induced;
        } else if (out.node_part[y] == kUnassigned) {
          queue.push_back(y);
        }
      }
    }
    if (!core.empty()) members.push_back(std::move(core));
  }

  out.parts.resize(members.size());
  for (std::size_t pid = 0; pid < members.size(); ++pid) {
    Part& p = out.parts[pid];
    p.nodes = std::move(members[pid]);
    std::sort(p.nodes.begin(), p.nodes.end());
    p.num_core = p.nodes.size();
  }
  std::vector<std::vector<NodeId>> halo(out.parts.size());
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    const std::uint32_t pu = out.node_part[ed.u];
    const std::uint32_t pv = out.node_part[ed.v];
    Part& owner = out.parts[pu];
    owner.edges.push_back(e);
    if (pu != pv) {
      ++owner.cut_edges;
      halo[pu].push_back(ed.v);
    }
  }
  for (std::size_t pid = 0; pid < out.parts.size(); ++pid) {
    auto& h = halo[pid];
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    auto& nodes = out.parts[pid].nodes;
    nodes.insert(nodes.end(), h.begin(), h.end());
  }
  return out;
}

void write_partition_csv(const Partition& p, const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw Error("cannot write " + file.string());
  os << "node_id,part_id\n";
  for (std::size_t i = 0; i < p.node_part.size(); ++i) os << i << ',' << p.node_part[i] << '\n';
}

} // namespace gsparse
