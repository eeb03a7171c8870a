#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsparse/checkpoint.hpp"
#include "gsparse/config.hpp"
#include "gsparse/error.hpp"
#include "gsparse/graph_io.hpp"
#include "gsparse/metrics.hpp"
#include "gsparse/runtime.hpp"
#include "gsparse/sampler.hpp"
#include "gsparse/summary.hpp"
#include "gsparse/sweep.hpp"
#include "gsparse/theory.hpp"
#include "gsparse/trainer.hpp"

namespace fs = std::filesystem;
using namespace gsparse;

namespace {

constexpr int kExitError = 1;
constexpr int kExitDivergence = 2;

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::string checkpoint;
  double q = -1.0;
};

ExperimentConfig resolve(const Options& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--set expects section.key=value, got '" + kv + "'");
    apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!o.checkpoint.empty()) cfg.checkpoint = o.checkpoint;
  return cfg;
}

fs::path checkpoint_path(const ExperimentConfig& cfg) {
  return cfg.checkpoint.empty() ? cfg.output_dir / "checkpoint.bin" : cfg.checkpoint;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream os(file);
  if (!os) throw Error("cannot write " + file.string());
  os << text;
}

int cmd_train(const Options& o, bool conditional) {
  ExperimentConfig cfg = resolve(o);
  if (conditional) cfg.run.conditional = true;
  const Graph g = make_graph(cfg.graph);
  fs::create_directories(cfg.output_dir);
  const TrainResult res = train(g, cfg.run);
  write_metrics_csv(res.metrics, cfg.output_dir / "metrics.csv");
  const fs::path ckpt = checkpoint_path(cfg);
  if (ckpt.has_parent_path()) fs::create_directories(ckpt.parent_path());
  save_checkpoint(res.state, ckpt);
  write_text(cfg.output_dir / "summary.json", summary_to_json(res.summary));
  std::printf("method=%s epochs=%d best_epoch=%d best_T=%.4f test_micro_f1=%.4f test_macro_f1=%.4f "
              "subgraph_edge_homophily=%.4f\n",
              to_string(res.summary.method), res.summary.epochs_run, res.summary.best_epoch, res.summary.best_t,
              res.summary.test_micro_f1, res.summary.test_macro_f1, res.summary.subgraph_edge_homophily);
  return 0;
}

int cmd_infer(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  const Graph g = make_graph(cfg.graph);
  const ModelState st = load_checkpoint(checkpoint_path(cfg));
  const InferenceResult res = infer_ensemble(st, g, cfg.run, cfg.run.ensemble);
  fs::create_directories(cfg.output_dir);
  std::ofstream os(cfg.output_dir / "predictions.csv");
  if (!os) throw Error("cannot write predictions");
  os << "node_id,label\n";
  for (std::size_t i = 0; i < res.labels.size(); ++i) os << i << ',' << res.labels[i] << '\n';
  const auto test = g.nodes_in(Split::test);
  if (!test.empty()) {
    std::printf("test_micro_f1=%.4f test_macro_f1=%.4f subgraph_edge_homophily=%.4f\n",
                micro_f1(res.labels, g.labels(), test), macro_f1(res.labels, g.labels(), test),
                res.subgraph_edge_homophily);
  }
  return 0;
}

int cmd_sparsify(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  const Graph g = make_graph(cfg.graph);
  const ModelState st = load_checkpoint(checkpoint_path(cfg));
  const double q = o.q > 0.0 ? o.q : cfg.run.q;
  const SparseSubgraph sg = sample_sparse_subgraph(st, g, cfg.run, q);
  fs::create_directories(cfg.output_dir);
  write_subgraph_csv(sg, cfg.output_dir / "subgraph.csv");
  const HomophilyReport rep = subgraph_homophily_report(g, sg.edge_indices);
  write_text(cfg.output_dir / "subgraph_homophily.json", homophily_to_json(rep, sg.edge_indices.size()));
  std::printf("edges=%zu edge_homophily=%.4f node_homophily=%.4f adjusted_homophily=%.4f\n", sg.edge_indices.size(),
              rep.edge_homophily, rep.node_homophily, rep.adjusted_homophily);
  return 0;
}

int cmd_sweep(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  fs::create_directories(cfg.output_dir);
  const Graph g = make_graph(cfg.graph);
  const auto rows = sweep_sparsity(g, cfg.run, cfg.sweep.methods, cfg.sweep.qs, cfg.sweep.seeds);
  write_results_csv(rows, cfg.output_dir / "results.csv");
  std::printf("wrote %zu rows to %s\n", rows.size(), (cfg.output_dir / "results.csv").c_str());
  if (cfg.sweep.heatmap) {
    const auto cells = homophily_sparsity_grid(balanced_labels(cfg.graph.nodes, cfg.graph.classes),
                                               cfg.graph.homophily, cfg.run, cfg.sweep.hs, cfg.sweep.qs,
                                               cfg.sweep.seeds);
    write_pivot_csv(cells, cfg.output_dir / "heatmap.csv");
    std::printf("wrote %zu cells to %s\n", cells.size(), (cfg.output_dir / "heatmap.csv").c_str());
  }
  return 0;
}

int cmd_gen(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  const Graph g = make_graph(cfg.graph);
  const fs::path dir = cfg.output_dir / "graph";
  save_graph(g, dir);
  const HomophilyReport r = homophily_report(g);
  std::printf("nodes=%zu edges=%zu node_homophily=%.4f edge_homophily=%.4f adjusted_homophily=%.4f -> %s\n",
              g.num_nodes(), g.num_edges(), r.node_homophily, r.edge_homophily, r.adjusted_homophily, dir.c_str());
  return 0;
}

int cmd_theory(const Options& o) {
  const ExperimentConfig cfg = resolve(o);
  const auto reports = run_theory_suite(cfg.theory);
  fs::create_directories(cfg.output_dir);
  write_text(cfg.output_dir / "theory.json", report_to_json(reports) + "\n");
  std::size_t held = 0;
  for (const auto& r : reports) held += r.holds;
  std::printf("%zu of %zu bound checks hold -> %s\n", held, reports.size(), (cfg.output_dir / "theory.json").c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  gsparse::configure_allocator();
  CLI::App app{"Learned graph sparsification: train, sparsify, sweep, generate graphs and check sampling bounds"};
  app.require_subcommand(0, 1);
  bool dump_defaults = false;
  app.add_flag("--dump-defaults", dump_defaults, "Print the default configuration and exit");

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config, "Configuration file");
    sub->add_option("--set", opt.overrides, "Override a key, section.key=value (repeatable)");
  };
  auto* train_cmd = app.add_subcommand("train", "Train and write metrics, checkpoint and summary");
  auto* cond_cmd = app.add_subcommand("train-conditional", "Train with conditional encoder updates");
  auto* infer_cmd = app.add_subcommand("infer", "Ensemble inference from a checkpoint");
  auto* sparsify_cmd = app.add_subcommand("sparsify", "Export one sampled subgraph from a checkpoint");
  auto* sweep_cmd = app.add_subcommand("sweep", "Method x sparsity x seed comparison table");
  auto* gen_cmd = app.add_subcommand("gen", "Write the configured graph as a graph directory");
  auto* theory_cmd = app.add_subcommand("theory-check", "Monte-Carlo check of the sampling bounds");
  auto* dump_cmd = app.add_subcommand("dump-defaults", "Print the default configuration");
  for (CLI::App* s : {train_cmd, cond_cmd, infer_cmd, sparsify_cmd, sweep_cmd, gen_cmd, theory_cmd}) add_common(s);
  for (CLI::App* s : {infer_cmd, sparsify_cmd}) s->add_option("--checkpoint", opt.checkpoint, "Checkpoint path");
  sparsify_cmd->add_option("--q", opt.q, "Percent of edges to keep (default: run.q)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (dump_defaults || dump_cmd->parsed()) {
      std::cout << dump_config(ExperimentConfig{});
      return 0;
    }
    if (train_cmd->parsed()) return cmd_train(opt, false);
    if (cond_cmd->parsed()) return cmd_train(opt, true);
    if (infer_cmd->parsed()) return cmd_infer(opt);
    if (sparsify_cmd->parsed()) return cmd_sparsify(opt);
    if (sweep_cmd->parsed()) return cmd_sweep(opt);
    if (gen_cmd->parsed()) return cmd_gen(opt);
    if (theory_cmd->parsed()) return cmd_theory(opt);
    std::cout << app.help();
    return 0;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: training diverged: %s\n", e.what());
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
}
