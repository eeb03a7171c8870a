#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gsparse/generators.hpp"
#include "gsparse/theory.hpp"
#include "gsparse/trainer.hpp"

namespace gsparse {

/// Where the input graph comes from: a graph directory or a generator.
struct GraphSource {
  std::string kind = "moon";  // moon | homophily | dir
  std::filesystem::path dir;
  MoonGraphOptions moon{};
  HomophilyGraphOptions homophily{};
  std::size_t nodes = 1000;  // homophily generator
  int classes = 5;           // homophily generator
};

struct SweepSpec {
  std::vector<Method> methods{Method::sgs, Method::random};
  std::vector<double> qs{20.0, 100.0};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  bool heatmap = false;
  std::vector<double> hs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

struct ExperimentConfig {
  RunConfig run{};
  GraphSource graph{};
  std::filesystem::path output_dir = "out";
  std::filesystem::path checkpoint;  // empty: <output_dir>/checkpoint.bin
  SweepSpec sweep{};
  TheorySuiteOptions theory{};
};

/// Parses "[section]" headers and "key = value" lines; '#' starts a
/// comment. Unknown sections or keys, repeated keys and malformed values throw.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& file);

/// Sets one "section.key" to value with the same checks as parse_config.
void apply_override(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Every key with its current value, in a form parse_config reads back.
std::string dump_config(const ExperimentConfig& cfg);

/// Builds or loads the graph the config describes.
Graph make_graph(const GraphSource& src);

} // namespace gsparse
