#include "gsparse/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "gsparse/error.hpp"

namespace gsparse {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file.string());
  return in;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string where(const fs::path& file, std::size_t line_no) {
  return file.filename().string() + ":" + std::to_string(line_no);
}

long long parse_int(std::string_view tok, const fs::path& file, std::size_t line_no) {
  tok = trim(tok);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw Error(where(file, line_no) + ": '" + std::string(tok) + "' is not an integer");
  }
  return value;
}

double parse_real(std::string_view tok, const fs::path& file, std::size_t line_no) {
  tok = trim(tok);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw Error(where(file, line_no) + ": '" + std::string(tok) + "' is not a number");
  }
  if (!std::isfinite(value)) throw Error(where(file, line_no) + ": non-finite value");
  return value;
}

NodeId parse_node(std::string_view tok, std::size_t num_nodes, const fs::path& file,
                  std::size_t line_no) {
  const long long id = parse_int(tok, file, line_no);
  if (id < 0 || static_cast<unsigned long long>(id) >= num_nodes) {
    throw Error(where(file, line_no) + ": node id " + std::to_string(id) + " outside [0," +
                std::to_string(num_nodes) + ")");
  }
  return static_cast<NodeId>(id);
}

/// Non-empty lines of a file, with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> read_lines(const fs::path& file) {
  auto in = open_input(file);
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty()) continue;
    lines.emplace_back(no, line);
  }
  return lines;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

} // namespace

std::vector<EdgeRow> read_edge_csv(const fs::path& file, std::size_t num_nodes) {
  std::vector<EdgeRow> rows;
  for (const auto& [no, line] : read_lines(file)) {
    const auto tok = split_commas(line);
    if (tok.size() != 2 && tok.size() != 3) {
      throw Error(where(file, no) + ": expected 'u,v' or 'u,v,weight'");
    }
    EdgeRow r{parse_node(tok[0], num_nodes, file, no), parse_node(tok[1], num_nodes, file, no), 1.0};
    if (tok.size() == 3) r.weight = parse_real(tok[2], file, no);
    rows.push_back(r);
  }
  return rows;
}

Graph load_graph(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("graph directory " + dir.string() + " does not exist");
  for (const char* name : {"meta.json", "edges.csv", "features.csv", "labels.csv", "splits.csv"}) {
    if (!fs::exists(dir / name)) throw Error("missing file " + (dir / name).string());
  }

  nlohmann::json meta;
  try {
    auto in = open_input(dir / "meta.json");
    meta = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error((dir / "meta.json").string() + ": " + e.what());
  }
  std::size_t num_nodes = 0;
  int num_classes = 0;
  Eigen::Index feature_dim = 0;
  try {
    num_nodes = meta.at("num_nodes").get<std::size_t>();
    num_classes = meta.at("num_classes").get<int>();
    feature_dim = meta.at("feature_dim").get<Eigen::Index>();
  } catch (const nlohmann::json::exception& e) {
    throw Error((dir / "meta.json").string() + ": " + e.what());
  }

  std::vector<std::pair<NodeId, NodeId>> pairs;
  const fs::path edge_file = dir / "edges.csv";
  for (const auto& [no, line] : read_lines(edge_file)) {
    const auto tok = split_commas(line);
    if (tok.size() != 2) throw Error(where(edge_file, no) + ": expected 'u,v'");
    const NodeId u = parse_node(tok[0], num_nodes, edge_file, no);
    const NodeId v = parse_node(tok[1], num_nodes, edge_file, no);
    if (u == v) throw Error(where(edge_file, no) + ": self-loop on node " + std::to_string(u) + " rejected");
    pairs.emplace_back(u, v);
  }

  const fs::path feat_file = dir / "features.csv";
  const auto feat_lines = read_lines(feat_file);
  if (feat_lines.size() != num_nodes) {
    throw Error(feat_file.string() + ": " + std::to_string(feat_lines.size()) + " rows, expected " +
                std::to_string(num_nodes));
  }
  Matrix features(static_cast<Eigen::Index>(num_nodes), feature_dim);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    const auto& [no, line] = feat_lines[i];
    const auto tok = split_commas(line);
    if (static_cast<Eigen::Index>(tok.size()) != feature_dim) {
      throw Error(where(feat_file, no) + ": " + std::to_string(tok.size()) + " values, expected " +
                  std::to_string(feature_dim));
    }
    for (Eigen::Index j = 0; j < feature_dim; ++j) {
      features(static_cast<Eigen::Index>(i), j) = parse_real(tok[static_cast<std::size_t>(j)], feat_file, no);
    }
  }

  const fs::path label_file = dir / "labels.csv";
  const auto label_lines = read_lines(label_file);
  if (label_lines.size() != num_nodes) throw Error(label_file.string() + ": row count does not match num_nodes");
  std::vector<int> labels(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    const auto& [no, line] = label_lines[i];
    const long long y = parse_int(line, label_file, no);
    if (y < 0 || y >= num_classes) {
      throw Error(where(label_file, no) + ": label " + std::to_string(y) + " outside [0," +
                  std::to_string(num_classes) + ")");
    }
    labels[i] = static_cast<int>(y);
  }

  const fs::path split_file = dir / "splits.csv";
  const auto split_lines = read_lines(split_file);
  if (split_lines.size() != num_nodes) throw Error(split_file.string() + ": row count does not match num_nodes");
  std::vector<Split> split(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    const auto& [no, line] = split_lines[i];
    try {
      split[i] = parse_split(std::string(trim(line)));
    } catch (const Error& e) {
      throw Error(where(split_file, no) + ": " + e.what());
    }
  }

  Graph g(num_nodes, pairs, std::move(features), std::move(labels), std::move(split), num_classes);
  if (meta.contains("description") && meta["description"].is_string()) {
    g.set_description(meta["description"].get<std::string>());
  }
  return g;
}

void save_graph(const Graph& g, const fs::path& dir) {
  fs::create_directories(dir);
  auto open_output = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
  };

  nlohmann::json meta = {{"num_nodes", g.num_nodes()},
                         {"num_classes", g.num_classes()},
                         {"feature_dim", g.feature_dim()}};
  if (!g.description().empty()) meta["description"] = g.description();
  open_output("meta.json") << meta.dump(2) << '\n';

  {
    auto out = open_output("edges.csv");
    for (const Edge& e : g.edges()) out << e.u << ',' << e.v << '\n';
  }
  {
    auto out = open_output("features.csv");
    const Matrix& x = g.features();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (j) out << ',';
        out << format_real(x(i, j));
      }
      out << '\n';
    }
  }
  {
    auto out = open_output("labels.csv");
    for (int y : g.labels()) out << y << '\n';
  }
  {
    auto out = open_output("splits.csv");
    for (Split s : g.split()) out << to_string(s) << '\n';
  }
}

} // namespace gsparse
