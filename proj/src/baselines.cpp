#include "gsparse/baselines.hpp"

#include <Eigen/Eigenvalues>

#include "gsparse/error.hpp"
#include "gsparse/prior.hpp"

namespace gsparse {

const char* to_string(FixedKind k) {
  switch (k) {
  case FixedKind::random: return "random";
  case FixedKind::degree_weighted: return "degree";
  case FixedKind::effective_resistance: return "er";
  }
  return "?";
}

std::vector<double> random_distribution(const Graph& g) {
  if (g.num_edges() == 0) throw Error("distribution over an empty edge set");
  return std::vector<double>(g.num_edges(), 1.0 / static_cast<double>(g.num_edges()));
}

std::vector<double> degree_weighted_distribution(const Graph& g) { return compute_prior(g); }

std::vector<double> effective_resistances(const Graph& g, std::size_t max_nodes) {
  const std::size_t n = g.num_nodes();
  if (n > max_nodes) {
    throw Error("exact effective resistance is capped at " + std::to_string(max_nodes) + " nodes, graph has " +
                std::to_string(n));
  }
  if (g.num_edges() == 0) throw Error("effective resistance of an empty edge set");
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const Edge& e : g.edges()) {
    lap(e.u, e.u) += 1.0;
    lap(e.v, e.v) += 1.0;
    lap(e.u, e.v) -= 1.0;
    lap(e.v, e.u) -= 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  if (eig.info() != Eigen::Success) throw Error("Laplacian eigendecomposition failed");
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const Eigen::MatrixXd& vec = eig.eigenvectors();
  // Eigenvalues below this (relative to the largest) span the kernel, one per component.
  const double tol = 1e-9 * std::max(1.0, lam.maxCoeff());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > tol) keep.push_back(i);
  }
  std::vector<double> r(g.num_edges());
  for (EdgeId id = 0; id < g.num_edges(); ++id) {
    const Edge& e = g.edge(id);
    double s = 0.0;
    for (Eigen::Index i : keep) {
      const double d = vec(e.u, i) - vec(e.v, i);
      s += d * d / lam(i);
    }
    r[id] = s;
  }
  return r;
}

std::vector<double> effective_resistance_distribution(const Graph& g, std::size_t max_nodes) {
  return normalized(effective_resistances(g, max_nodes));
}

std::vector<double> fixed_distribution(const Graph& g, FixedKind kind) {
  switch (kind) {
  case FixedKind::random: return random_distribution(g);
  case FixedKind::degree_weighted: return degree_weighted_distribution(g);
  case FixedKind::effective_resistance: return effective_resistance_distribution(g);
  }
  throw Error("unknown fixed sampler");
}

} // namespace gsparse
