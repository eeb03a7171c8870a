#include "gsparse/prior.hpp"

#include <numeric>

#include "gsparse/error.hpp"

namespace gsparse {

std::vector<double> normalized(std::vector<double> w) {
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(s > 0.0)) throw Error("cannot normalize a vector with non-positive sum");
  for (double& x : w) x /= s;
  return w;
}

std::vector<double> compute_prior(const Graph& g) {
  if (g.num_edges() == 0) throw Error("prior of a graph without edges");
  std::vector<double> w(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    w[e] = 1.0 / static_cast<double>(g.degree(ed.u)) + 1.0 / static_cast<double>(g.degree(ed.v));
  }
  return normalized(std::move(w));
}

} // namespace gsparse
