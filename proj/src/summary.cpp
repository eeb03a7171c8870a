#include "gsparse/summary.hpp"

#include <nlohmann/json.hpp>

namespace gsparse {

std::string summary_to_json(const RunSummary& s) {
  const nlohmann::json j = {
      {"schema_version", kSummarySchemaVersion},
      {"method", to_string(s.method)},
      {"q", s.q},
      {"seed", s.seed},
      {"test_micro_f1", s.test_micro_f1},
      {"test_macro_f1", s.test_macro_f1},
      {"val_micro_f1", s.val_micro_f1},
      {"best_t", s.best_t},
      {"best_epoch", s.best_epoch},
      {"epochs_run", s.epochs_run},
      {"epochs_to_converge", s.epochs_to_converge},
      {"input_edge_homophily", s.input_edge_homophily},
      {"subgraph_edge_homophily", s.subgraph_edge_homophily},
  };
  return j.dump(2) + "\n";
}

std::string homophily_to_json(const HomophilyReport& r, std::size_t num_edges) {
  const nlohmann::json j = {
      {"num_edges", num_edges},
      {"node_homophily", r.node_homophily},
      {"edge_homophily", r.edge_homophily},
      {"adjusted_homophily", r.adjusted_homophily},
      {"is_heterophilic", r.is_heterophilic},
  };
  return j.dump(2) + "\n";
}

} // namespace gsparse
