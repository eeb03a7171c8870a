#include "gsparse/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gsparse/error.hpp"
#include "gsparse/graph_io.hpp"

namespace gsparse {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw Error("'" + s + "' is not a number");
  return v;
}

template <typename Int>
Int to_int(const std::string& s) {
  Int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw Error("'" + s + "' is not a non-negative integer");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error("'" + s + "' is not true or false");
}

std::vector<std::string> to_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw Error("empty list element in '" + s + "'");
    out.push_back(item);
  }
  if (out.empty()) throw Error("empty list");
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::string doc;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

#define GS_REAL(sec, name, doc, expr)                                                       \
  Field {                                                                                   \
    sec, name, doc, [](const ExperimentConfig& c) { return fmt(c.expr); },                  \
        [](ExperimentConfig& c, const std::string& v) { c.expr = to_double(v); }            \
  }
#define GS_INT(sec, name, doc, expr, type)                                                  \
  Field {                                                                                   \
    sec, name, doc, [](const ExperimentConfig& c) { return std::to_string(c.expr); },       \
        [](ExperimentConfig& c, const std::string& v) { c.expr = to_int<type>(v); }         \
  }
#define GS_BOOL(sec, name, doc, expr)                                                       \
  Field {                                                                                   \
    sec, name, doc, [](const ExperimentConfig& c) { return std::string(c.expr ? "true" : "false"); }, \
        [](ExperimentConfig& c, const std::string& v) { c.expr = to_bool(v); }              \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      Field{"run", "method", "sgs | full | random | degree | er",
            [](const ExperimentConfig& c) { return std::string(to_string(c.run.method)); },
            [](ExperimentConfig& c, const std::string& v) { c.run.method = parse_method(v); }},
      GS_REAL("run", "q", "percent of edges kept, (0, 100]", run.q),
      GS_INT("run", "hidden", "hidden width of encoder and GCN", run.hidden, long),
      GS_INT("run", "layers", "GCN depth", run.layers, int),
      GS_REAL("run", "lr", "Adam learning rate", run.lr),
      GS_REAL("run", "dropout", "dropout on the first GCN layer while training", run.dropout),
      GS_INT("run", "max_epochs", "epoch limit, also the annealing horizon", run.max_epochs, int),
      GS_REAL("run", "lambda", "weight of the learned distribution against the prior", run.lambda),
      GS_REAL("run", "alpha_ce", "cross-entropy weight", run.alpha.ce),
      GS_REAL("run", "alpha_assor", "assortativity weight", run.alpha.assor),
      GS_REAL("run", "alpha_cons", "consistency weight", run.alpha.cons),
      GS_BOOL("run", "assor_one_sided", "keep only the same-label term of the assortativity loss", run.assor_one_sided),
      Field{"run", "reduction", "mean | sum for the edge losses",
            [](const ExperimentConfig& c) { return std::string(c.run.reduction == Reduction::mean ? "mean" : "sum"); },
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "mean") {
                c.run.reduction = Reduction::mean;
              } else if (v == "sum") {
                c.run.reduction = Reduction::sum;
              } else {
                throw Error("'" + v + "' is not mean or sum");
              }
            }},
      GS_REAL("run", "t0", "initial temperature", run.t0),
      GS_REAL("run", "t_min", "final temperature", run.t_min),
      Field{"run", "norm_mode", "sum | softmax_temp | gumbel_topk",
            [](const ExperimentConfig& c) { return std::string(to_string(c.run.norm_mode)); },
            [](ExperimentConfig& c, const std::string& v) { c.run.norm_mode = parse_norm_mode(v); }},
      GS_INT("run", "edge_cap", "edges per partition part", run.edge_cap, std::size_t),
      GS_INT("run", "ensemble", "subgraphs averaged at inference", run.ensemble, int),
      GS_BOOL("run", "conditional", "update the encoder only when it beats the prior", run.conditional),
      GS_INT("run", "patience", "epochs without validation improvement before stopping, counted once T reaches t_min", run.patience, int),
      GS_BOOL("run", "stop_on_convergence", "stop once the loss meets the convergence rule", run.stop_on_convergence),
      GS_BOOL("run", "gnn_bias", "bias terms in the GCN layers", run.gnn_bias),
      GS_INT("run", "seed", "master seed", run.seed, std::uint64_t),

      Field{"graph", "source", "moon | homophily | dir",
            [](const ExperimentConfig& c) { return c.graph.kind; },
            [](ExperimentConfig& c, const std::string& v) {
              if (v != "moon" && v != "homophily" && v != "dir") throw Error("'" + v + "' is not moon, homophily or dir");
              c.graph.kind = v;
            }},
      Field{"graph", "dir", "graph directory when source = dir",
            [](const ExperimentConfig& c) { return c.graph.dir.string(); },
            [](ExperimentConfig& c, const std::string& v) { c.graph.dir = v; }},
      GS_INT("graph", "moon_nodes", "moon generator: node count (even)", graph.moon.n_nodes, std::size_t),
      GS_REAL("graph", "moon_noise", "moon generator: position jitter", graph.moon.noise),
      GS_INT("graph", "moon_k_nn", "moon generator: nearest neighbors per node", graph.moon.k_nn, std::size_t),
      GS_REAL("graph", "moon_bridge_fraction", "moon generator: share of cross-moon edges", graph.moon.bridge_fraction),
      GS_REAL("graph", "moon_train", "moon generator: train fraction", graph.moon.split.train),
      GS_REAL("graph", "moon_val", "moon generator: validation fraction", graph.moon.split.val),
      GS_INT("graph", "moon_seed", "moon generator: seed", graph.moon.seed, std::uint64_t),
      GS_INT("graph", "nodes", "homophily generator: node count", graph.nodes, std::size_t),
      GS_INT("graph", "classes", "homophily generator: balanced class count", graph.classes, int),
      GS_INT("graph", "degree", "homophily generator: edges emitted per node", graph.homophily.degree, std::size_t),
      GS_REAL("graph", "target_h", "homophily generator: share of forced same-class edges", graph.homophily.target_h),
      GS_INT("graph", "feature_dim", "homophily generator: feature width (>= classes)", graph.homophily.feature_dim, long),
      GS_REAL("graph", "feature_noise", "homophily generator: feature noise std-dev", graph.homophily.feature_noise),
      GS_REAL("graph", "train", "homophily generator: train fraction", graph.homophily.split.train),
      GS_REAL("graph", "val", "homophily generator: validation fraction", graph.homophily.split.val),
      GS_INT("graph", "seed", "homophily generator: seed", graph.homophily.seed, std::uint64_t),

      Field{"output", "dir", "directory for all outputs",
            [](const ExperimentConfig& c) { return c.output_dir.string(); },
            [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; }},
      Field{"output", "checkpoint", "checkpoint path; empty means <dir>/checkpoint.bin",
            [](const ExperimentConfig& c) { return c.checkpoint.string(); },
            [](ExperimentConfig& c, const std::string& v) { c.checkpoint = v; }},

      Field{"sweep", "methods", "comma-separated methods",
            [](const ExperimentConfig& c) { return join(c.sweep.methods, [](Method m) { return std::string(to_string(m)); }); },
            [](ExperimentConfig& c, const std::string& v) {
              c.sweep.methods.clear();
              for (const auto& s : to_list(v)) c.sweep.methods.push_back(parse_method(s));
            }},
      Field{"sweep", "q", "comma-separated sparsity percents",
            [](const ExperimentConfig& c) { return join(c.sweep.qs, fmt); },
            [](ExperimentConfig& c, const std::string& v) {
              c.sweep.qs.clear();
              for (const auto& s : to_list(v)) c.sweep.qs.push_back(to_double(s));
            }},
      Field{"sweep", "seeds", "comma-separated seeds",
            [](const ExperimentConfig& c) { return join(c.sweep.seeds, [](std::uint64_t s) { return std::to_string(s); }); },
            [](ExperimentConfig& c, const std::string& v) {
              c.sweep.seeds.clear();
              for (const auto& s : to_list(v)) c.sweep.seeds.push_back(to_int<std::uint64_t>(s));
            }},
      GS_BOOL("sweep", "heatmap", "also run the homophily x sparsity grid with run.method", sweep.heatmap),
      Field{"sweep", "h", "comma-separated target homophily values for the grid",
            [](const ExperimentConfig& c) { return join(c.sweep.hs, fmt); },
            [](ExperimentConfig& c, const std::string& v) {
              c.sweep.hs.clear();
              for (const auto& s : to_list(v)) c.sweep.hs.push_back(to_double(s));
            }},

      GS_INT("theory", "nodes", "nodes of the random edge universe", theory.nodes, std::size_t),
      GS_INT("theory", "edges", "edges of the random edge universe", theory.edges, std::size_t),
      GS_INT("theory", "k", "draws per sampler", theory.k, std::size_t),
      GS_INT("theory", "pairs", "random distribution pairs", theory.pairs, std::size_t),
      GS_INT("theory", "overlap_trials", "trials for the common-edge check", theory.overlap_trials, std::size_t),
      GS_INT("theory", "matrix_trials", "trials for the adjacency and GCN checks", theory.matrix_trials, std::size_t),
      GS_REAL("theory", "concentration", "Dirichlet concentration", theory.concentration),
      GS_INT("theory", "depth", "GCN depth for the embedding check", theory.depth, int),
      GS_REAL("theory", "alpha", "spectral norm of every GCN weight", theory.alpha),
      GS_INT("theory", "hidden", "GCN width for the embedding check", theory.hidden, long),
      GS_INT("theory", "feature_dim", "node feature width for the embedding check", theory.feature_dim, long),
      GS_INT("theory", "seed", "master seed", theory.seed, std::uint64_t),
  };
  return f;
}

#undef GS_REAL
#undef GS_INT
#undef GS_BOOL

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  std::map<std::string, const Field*> index;
  std::set<std::string> sections;
  for (const Field& f : fields()) {
    index[f.section + "." + f.key] = &f;
    sections.insert(f.section);
  }
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) throw Error(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(where + ": expected key = value");
    if (section.empty()) throw Error(where + ": key outside a section");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const std::string full = section + "." + key;
    auto it = index.find(full);
    if (it == index.end()) throw Error(where + ": unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(full).second) throw Error(where + ": key '" + full + "' set twice");
    try {
      it->second->set(cfg, value);
    } catch (const Error& e) {
      throw Error(where + ": " + full + ": " + e.what());
    }
  }
  try {
    cfg.run.validate();
  } catch (const Error& e) {
    throw Error(origin + ": " + e.what());
  }
  return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value) {
  for (const Field& f : fields()) {
    if (f.section + "." + f.key != dotted_key) continue;
    try {
      f.set(cfg, trim(value));
      cfg.run.validate();
    } catch (const Error& e) {
      throw Error(dotted_key + ": " + e.what());
    }
    return;
  }
  throw Error("unknown key '" + dotted_key + "'");
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.string());
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    std::string value = f.get(cfg);
    if (value.empty()) value = "\"\"";
    out += f.key + " = " + value + "  # " + f.doc + "\n";
  }
  return out;
}

Graph make_graph(const GraphSource& src) {
  if (src.kind == "dir") {
    if (src.dir.empty()) throw Error("graph.source = dir needs graph.dir");
    return load_graph(src.dir);
  }
  if (src.kind == "moon") return gen_moon_graph(src.moon);
  if (src.kind == "homophily") return gen_homophily_controlled(balanced_labels(src.nodes, src.classes), src.homophily);
  throw Error("unknown graph source '" + src.kind + "'");
}

} // namespace gsparse
