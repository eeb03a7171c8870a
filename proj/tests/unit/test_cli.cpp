#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gsparse/config.hpp"
#include "gsparse/error.hpp"
#include "gsparse/graph_io.hpp"
#include "gsparse/sampler.hpp"
#include "gsparse/summary.hpp"

namespace fs = std::filesystem;
using namespace gsparse;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
};

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("gsparse_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& f) {
  std::ifstream is(f);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Runs the CLI with stdout and stderr merged.
CliRun cli(const std::string& args) {
  const std::string cmd = std::string(GSPARSE_CLI) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t count_lines(const fs::path& f) {
  std::ifstream is(f);
  std::size_t n = 0;
  for (std::string line; std::getline(is, line);) n += !line.empty();
  return n;
}

const char* kQuickTrain = "--set run.hidden=8 --set run.max_epochs=6 --set run.ensemble=2";

} // namespace

TEST(Config, DefaultsRoundTrip) {
  const ExperimentConfig def{};
  const std::string text = dump_config(def);
  EXPECT_EQ(dump_config(parse_config(text)), text);
}

TEST(Config, ParsesSectionsAndComments) {
  const ExperimentConfig c = parse_config("# top\n[run]\nq = 35 # keep\nmethod = er\n[sweep]\nq = 10,20\n");
  EXPECT_EQ(c.run.q, 35.0);
  EXPECT_EQ(c.run.method, Method::er);
  EXPECT_EQ(c.sweep.qs, (std::vector<double>{10.0, 20.0}));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("[run]\nno_such_key = 1\n"), Error);
  EXPECT_THROW(parse_config("[nowhere]\n"), Error);
  EXPECT_THROW(parse_config("[run]\nq = 1\nq = 2\n"), Error);
  EXPECT_THROW(parse_config("[run]\nq = abc\n"), Error);
  EXPECT_THROW(parse_config("q = 3\n"), Error);
  ExperimentConfig c;
  EXPECT_THROW(apply_override(c, "run.nope", "1"), Error);
  apply_override(c, "graph.target_h", "0.25");
  EXPECT_EQ(c.graph.homophily.target_h, 0.25);
}

TEST(Summary, GoldenFile) {
  RunSummary s;
  s.method = Method::sgs;
  s.q = 20.0;
  s.seed = 3;
  s.test_micro_f1 = 0.96;
  s.test_macro_f1 = 0.95;
  s.val_micro_f1 = 0.875;
  s.best_t = 0.1;
  s.best_epoch = 412;
  s.epochs_run = 463;
  s.epochs_to_converge = 500;
  s.input_edge_homophily = 0.32;
  s.subgraph_edge_homophily = 0.98;
  EXPECT_EQ(summary_to_json(s), slurp(fs::path(GSPARSE_TEST_DATA) / "summary_golden.json"));
}

TEST(Cli, DumpDefaults) {
  const CliRun r = cli("--dump-defaults");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, dump_config(ExperimentConfig{}));
  EXPECT_EQ(cli("dump-defaults").out, r.out);
}

TEST(Cli, MissingGraphDirectory) {
  const fs::path missing = fs::temp_directory_path() / "gsparse_cli_missing_graph";
  fs::remove_all(missing);
  const CliRun r = cli("train --set graph.source=dir --set graph.dir=" + missing.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find(missing.string()), std::string::npos) << r.out;
}

TEST(Cli, UnknownKeyFails) {
  const CliRun r = cli("train --set run.bogus=1");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("bogus"), std::string::npos);
}

TEST(Cli, GenPureHomophily) {
  const fs::path out = scratch("gen");
  const CliRun r = cli("gen --set graph.source=homophily --set graph.nodes=200 --set graph.target_h=1 --set output.dir=" +
                    out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(edge_homophily(load_graph(out / "graph")), 1.0);
  fs::remove_all(out);
}

TEST(Cli, TrainSparsifyInfer) {
  const fs::path out = scratch("train");
  const std::string common = std::string(kQuickTrain) + " --set output.dir=" + out.string();
  CliRun r = cli("train " + common);
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"metrics.csv", "checkpoint.bin", "summary.json"}) EXPECT_TRUE(fs::exists(out / f)) << f;
  EXPECT_EQ(count_lines(out / "metrics.csv"), 7u);
  EXPECT_NE(slurp(out / "summary.json").find("\"schema_version\": 1"), std::string::npos);

  ASSERT_EQ(cli("gen --set output.dir=" + out.string()).code, 0);
  const std::size_t edges = load_graph(out / "graph").num_edges();
  r = cli("sparsify --q 100 " + common);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(count_lines(out / "subgraph.csv"), edges);
  r = cli("sparsify --q 20 " + common);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(read_edge_csv(out / "subgraph.csv", 150).size(), edges_to_keep(20, edges));
  EXPECT_TRUE(fs::exists(out / "subgraph_homophily.json"));

  r = cli("infer " + common);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(count_lines(out / "predictions.csv"), 151u);

  r = cli("infer --checkpoint " + (out / "absent.bin").string() + " " + common);
  EXPECT_EQ(r.code, 1);
  fs::remove_all(out);
}

TEST(Cli, TrainIsDeterministic) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(cli(std::string("train ") + kQuickTrain + " --set output.dir=" + a.string()).code, 0);
  ASSERT_EQ(cli(std::string("train ") + kQuickTrain + " --set output.dir=" + b.string()).code, 0);
  EXPECT_EQ(slurp(a / "metrics.csv"), slurp(b / "metrics.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, SweepWritesTables) {
  const fs::path out = scratch("sweep");
  const CliRun r = cli(std::string("sweep ") + kQuickTrain +
                    " --set sweep.methods=random,degree --set sweep.q=20,100 --set sweep.seeds=0" +
                    " --set output.dir=" + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream is(out / "results.csv");
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, "method,q,seed,test_micro_f1,test_macro_f1,epochs_to_converge,subgraph_edge_homophily");
  std::vector<std::string> full_rows;
  for (std::string line; std::getline(is, line);)
    if (line.find(",100,") != std::string::npos) full_rows.push_back(line.substr(line.find(",100,")));
  ASSERT_EQ(full_rows.size(), 2u);
  // Identical topology at q = 100: both fixed samplers train the same model.
  EXPECT_EQ(full_rows[0], full_rows[1]);
  fs::remove_all(out);
}

TEST(Cli, TheoryCheck) {
  const fs::path out = scratch("theory");
  const CliRun r = cli("theory-check --set theory.pairs=2 --set theory.overlap_trials=2000 --set theory.matrix_trials=50"
                    " --set output.dir=" + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string json = slurp(out / "theory.json");
  EXPECT_NE(json.find("one_hot"), std::string::npos);
  EXPECT_EQ(json.find("\"holds\": false"), std::string::npos);
  fs::remove_all(out);
}
