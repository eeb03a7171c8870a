#include "gsparse/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "gsparse/error.hpp"

namespace gsparse {

double median(std::vector<double> v) {
  if (v.empty()) throw Error("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<RunSummary> sweep_sparsity(const Graph& g, const RunConfig& base, const std::vector<Method>& methods,
                                       const std::vector<double>& qs, const std::vector<std::uint64_t>& seeds) {
  std::vector<RunSummary> out;
  for (Method m : methods) {
    for (double q : qs) {
      for (std::uint64_t s : seeds) {
        RunConfig cfg = base;
        cfg.method = m;
        cfg.q = q;
        cfg.seed = s;
        out.push_back(train(g, cfg).summary);
      }
    }
  }
  return out;
}

void write_results_csv(const std::vector<RunSummary>& rows, const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw Error("cannot write " + file.string());
  os << "method,q,seed,test_micro_f1,test_macro_f1,epochs_to_converge,subgraph_edge_homophily\n";
  char buf[256];
  for (const RunSummary& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%g,%llu,%.6f,%.6f,%d,%.6f\n", to_string(r.method), r.q,
                  static_cast<unsigned long long>(r.seed), r.test_micro_f1, r.test_macro_f1, r.epochs_to_converge,
                  r.subgraph_edge_homophily);
    os << buf;
  }
}

std::vector<HeatmapCell> homophily_sparsity_grid(const std::vector<int>& labels, HomophilyGraphOptions graph_opt,
                                                 const RunConfig& base, const std::vector<double>& hs,
                                                 const std::vector<double>& qs,
                                                 const std::vector<std::uint64_t>& seeds) {
  std::vector<HeatmapCell> cells;
  const std::uint64_t graph_seed = graph_opt.seed;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    graph_opt.target_h = hs[i];
    graph_opt.seed = derive_seed(graph_seed, {i});
    const Graph g = gen_homophily_controlled(labels, graph_opt);
    const double input_h = edge_homophily(g);
    for (double q : qs) {
      std::vector<double> f1;
      for (std::uint64_t s : seeds) {
        RunConfig cfg = base;
        cfg.q = q;
        cfg.seed = s;
        f1.push_back(train(g, cfg).summary.test_micro_f1);
      }
      cells.push_back({hs[i], q, median(f1), input_h});
    }
  }
  return cells;
}

void write_pivot_csv(const std::vector<HeatmapCell>& cells, const std::filesystem::path& file) {
  std::vector<double> hs, qs;
  std::map<std::pair<double, double>, double> value;
  for (const HeatmapCell& c : cells) {
    if (std::find(hs.begin(), hs.end(), c.h) == hs.end()) hs.push_back(c.h);
    if (std::find(qs.begin(), qs.end(), c.q) == qs.end()) qs.push_back(c.q);
    value[{c.h, c.q}] = c.median_test_micro_f1;
  }
  std::ofstream os(file);
  if (!os) throw Error("cannot write " + file.string());
  char buf[64];
  os << "h";
  for (double q : qs) {
    std::snprintf(buf, sizeof buf, ",q%g", q);
    os << buf;
  }
  os << '\n';
  for (double h : hs) {
    std::snprintf(buf, sizeof buf, "%g", h);
    os << buf;
    for (double q : qs) {
      auto it = value.find({h, q});
      if (it == value.end()) {
        os << ',';
      } else {
        std::snprintf(buf, sizeof buf, ",%.6f", it->second);
        os << buf;
      }
    }
    os << '\n';
  }
}

} // namespace gsparse
