#include "gsparse/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "gsparse/error.hpp"
#include "gsparse/sampler.hpp"

namespace gsparse {

namespace {


void check_pair(std::span<const double> a, std::span<const double> b, std::size_t k) {
  if (a.size() != b.size() || a.empty()) throw Error("distributions must be non-empty and of equal length");
  if (k < 1) throw Error("k must be at least 1");
}

struct RunningMean {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double stderr_mean() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

bool within(double lower, double mean, double upper, double se) {
  return lower <= mean + kStatSlack * se && mean <= upper + kStatSlack * se;
}

std::vector<EdgeId> distinct(std::vector<EdgeId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Matrix adjacency(const Graph& g, const std::vector<EdgeId>& ids) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Matrix a = Matrix::Zero(n, n);
  for (EdgeId e : ids) {
    a(g.edge(e).u, g.edge(e).v) = 1.0;
    a(g.edge(e).v, g.edge(e).u) = 1.0;
  }
  return a;
}

Matrix normalized_adjacency(const Graph& g, const std::vector<EdgeId>& ids) {
  Matrix a = adjacency(g, ids);
  a += Matrix::Identity(a.rows(), a.cols());
  const Vector d = a.rowwise().sum();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) /= std::sqrt(d(i) * d(j));
  }
  return a;
}

double bound_scale(double k, double mass) { return std::sqrt(std::max(0.0, 2.0 * k * (1.0 - mass))); }

} // namespace

double sup_gap(std::span<const double> p_star, std::span<const double> p_tilde) {
  double e = 0.0;
  for (std::size_t j = 0; j < p_star.size(); ++j) e = std::max(e, std::abs(p_star[j] - p_tilde[j]));
  return e;
}

double overlap_mass(std::span<const double> p_star, std::span<const double> p_tilde, double eps) {
  double s = 0.0;
  for (std::size_t j = 0; j < p_star.size(); ++j) {
    const double t = std::max(0.0, p_star[j] + p_tilde[j] - eps);
    s += t * t / 4.0;
  }
  return s;
}

OverlapStats expected_common_edges_mc(std::span<const double> p_star, std::span<const double> p_tilde, std::size_t k,
                                      std::size_t trials, std::uint64_t seed) {
  check_pair(p_star, p_tilde, k);
  if (trials < 1) throw Error("trials must be at least 1");
  std::discrete_distribution<std::size_t> ds(p_star.begin(), p_star.end());
  std::discrete_distribution<std::size_t> dt(p_tilde.begin(), p_tilde.end());
  Rng rng_s = make_rng(seed, {1});
  Rng rng_t = make_rng(seed, {2});
  RunningMean pos, set;
  OverlapStats out;
  out.min = static_cast<double>(k);
  std::vector<std::size_t> a(k), b(k);
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t same = 0;
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = ds(rng_s);
      b[i] = dt(rng_t);
      same += a[i] == b[i];
    }
    pos.add(static_cast<double>(same));
    out.min = std::min(out.min, static_cast<double>(same));
    out.max = std::max(out.max, static_cast<double>(same));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t common = 0;
    for (std::size_t i = 0, j = 0; i < k && j < k;) {
      if (a[i] < b[j]) {
        ++i;
      } else if (b[j] < a[i]) {
        ++j;
      } else {
        ++common;
        const std::size_t v = a[i];
        while (i < k && a[i] == v) ++i;
        while (j < k && b[j] == v) ++j;
      }
    }
    set.add(static_cast<double>(common));
  }
  out.mean = pos.mean();
  out.stderr_mean = pos.stderr_mean();
  out.set_mean = set.mean();
  return out;
}

BoundCheckReport check_common_edge_bounds(std::span<const double> p_star, std::span<const double> p_tilde,
                                          std::size_t k, std::size_t trials, std::uint64_t seed) {
  const OverlapStats s = expected_common_edges_mc(p_star, p_tilde, k, trials, seed);
  BoundCheckReport r;
  r.name = "common_edges";
  r.trials = trials;
  r.empirical_mean = s.mean;
  r.stderr_mean = s.stderr_mean;
  r.set_overlap_mean = s.set_mean;
  r.epsilon_used = sup_gap(p_star, p_tilde);
  const double kd = static_cast<double>(k);
  r.lower_bound = kd * overlap_mass(p_star, p_tilde, r.epsilon_used);
  double l1 = 0.0;
  for (std::size_t j = 0; j < p_star.size(); ++j) l1 += std::abs(p_star[j] - p_tilde[j]);
  r.upper_bound = kd * (1.0 - l1 / 2.0);
  r.holds = within(r.lower_bound, r.empirical_mean, r.upper_bound, r.stderr_mean);
  return r;
}

BoundCheckReport check_adjacency_error(const Graph& g, std::span<const double> p_star, std::span<const double> p_tilde,
                                       std::size_t k, std::size_t trials, std::uint64_t seed) {
  check_pair(p_star, p_tilde, k);
  if (p_star.size() != g.num_edges()) throw Error("distribution length does not match the edge count");
  Rng rs = make_rng(seed, {1});
  Rng rt = make_rng(seed, {2});
  RunningMean err;
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix a_star = adjacency(g, distinct(sample_with_replacement(p_star, k, rs)));
    const Matrix a_tilde = adjacency(g, distinct(sample_with_replacement(p_tilde, k, rt)));
    err.add(spectral_norm(a_tilde - a_star));
  }
  BoundCheckReport r;
  r.name = "adjacency_error";
  r.trials = trials;
  r.empirical_mean = err.mean();
  r.stderr_mean = err.stderr_mean();
  r.epsilon_used = sup_gap(p_star, p_tilde);
  r.lower_bound = 0.0;
  r.upper_bound = bound_scale(static_cast<double>(k), overlap_mass(p_star, p_tilde, r.epsilon_used));
  r.holds = within(r.lower_bound, r.empirical_mean, r.upper_bound, r.stderr_mean);
  return r;
}

BoundCheckReport check_gcn_embedding_error(const Graph& g, std::span<const double> p_star,
                                           std::span<const double> p_tilde, std::size_t k, std::size_t trials,
                                           std::uint64_t seed, const GcnBoundOptions& opt) {
  check_pair(p_star, p_tilde, k);
  if (p_star.size() != g.num_edges()) throw Error("distribution length does not match the edge count");
  if (opt.depth < 1) throw Error("depth must be at least 1");
  if (!(opt.alpha >= 0.0 && opt.alpha < 1.0)) throw Error("alpha must lie in [0, 1)");

  Rng rw = make_rng(seed, {4});
  std::vector<Matrix> weights;
  for (int l = 0; l < opt.depth; ++l) {
    Matrix w = glorot_uniform(l == 0 ? g.feature_dim() : opt.hidden, opt.hidden, rw);
    const double s = spectral_norm(w);
    w *= s > 0.0 ? opt.alpha / s : 0.0;
    weights.push_back(std::move(w));
  }

  Rng rs = make_rng(seed, {1});
  Rng rt = make_rng(seed, opt.same_stream ? std::initializer_list<std::uint64_t>{1} : std::initializer_list<std::uint64_t>{2});
  const Matrix& x = g.features();
  double beta = spectral_norm(x);
  RunningMean err;
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix a_star = normalized_adjacency(g, distinct(sample_with_replacement(p_star, k, rs)));
    const Matrix a_tilde = normalized_adjacency(g, distinct(sample_with_replacement(p_tilde, k, rt)));
    Matrix h_star = x, h_tilde = x;
    for (const Matrix& w : weights) {
      h_star = (a_star * h_star * w).cwiseMax(0.0);
      h_tilde = (a_tilde * h_tilde * w).cwiseMax(0.0);
      beta = std::max({beta, spectral_norm(h_star), spectral_norm(h_tilde)});
    }
    err.add(spectral_norm(h_tilde - h_star));
  }
  BoundCheckReport r;
  r.name = "gcn_embedding_error";
  r.trials = trials;
  r.empirical_mean = err.mean();
  r.stderr_mean = err.stderr_mean();
  r.epsilon_used = sup_gap(p_star, p_tilde);
  r.alpha = opt.alpha;
  r.beta = beta;
  r.lower_bound = 0.0;
  r.upper_bound = beta / (1.0 - opt.alpha) *
                  bound_scale(static_cast<double>(k), overlap_mass(p_star, p_tilde, r.epsilon_used));
  r.holds = within(r.lower_bound, r.empirical_mean, r.upper_bound, r.stderr_mean);
  return r;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

std::vector<double> dirichlet(std::size_t n, double concentration, Rng& rng) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (double& x : p) {
    x = gamma(rng);
    s += x;
  }
  for (double& x : p) x /= s;
  return p;
}

Graph random_edge_graph(std::size_t num_nodes, std::size_t num_edges, Eigen::Index feature_dim, std::uint64_t seed) {
  if (num_edges > num_nodes * (num_nodes - 1) / 2) throw Error("too many edges for a simple graph");
  Rng rng = make_rng(seed, {0xED6E});
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(num_nodes - 1));
  std::set<std::pair<NodeId, NodeId>> seen;
  while (seen.size() < num_edges) {
    NodeId a = pick(rng), b = pick(rng);
    if (a == b) continue;
    seen.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<std::pair<NodeId, NodeId>> edges(seen.begin(), seen.end());
  std::normal_distribution<double> normal;
  Matrix x(static_cast<Eigen::Index>(num_nodes), feature_dim);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  return Graph(num_nodes, edges, std::move(x), std::vector<int>(num_nodes, 0),
               std::vector<Split>(num_nodes, Split::train), 1);
}

std::vector<BoundCheckReport> run_theory_suite(const TheorySuiteOptions& opt) {
  const Graph g = random_edge_graph(opt.nodes, opt.edges, opt.feature_dim, opt.seed);
  struct Case {
    std::string name;
    std::vector<double> p_star, p_tilde;
  };
  std::vector<Case> cases;
  cases.push_back({"uniform", std::vector<double>(opt.edges, 1.0 / static_cast<double>(opt.edges)), {}});
  cases.back().p_tilde = cases.back().p_star;
  std::vector<double> one_hot(opt.edges, 0.0);
  one_hot[0] = 1.0;
  cases.push_back({"one_hot", one_hot, one_hot});
  Rng rng = make_rng(opt.seed, {0xD1C1});
  for (std::size_t i = 0; i < opt.pairs; ++i) {
    Case c{"dirichlet_" + std::to_string(i), dirichlet(opt.edges, opt.concentration, rng), {}};
    c.p_tilde = dirichlet(opt.edges, opt.concentration, rng);
    cases.push_back(std::move(c));
  }
  GcnBoundOptions gcn;
  gcn.depth = opt.depth;
  gcn.alpha = opt.alpha;
  gcn.hidden = opt.hidden;
  std::vector<BoundCheckReport> out;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    const std::uint64_t s = derive_seed(opt.seed, {i});
    for (BoundCheckReport r : {check_common_edge_bounds(c.p_star, c.p_tilde, opt.k, opt.overlap_trials, s),
                               check_adjacency_error(g, c.p_star, c.p_tilde, opt.k, opt.matrix_trials, s),
                               check_gcn_embedding_error(g, c.p_star, c.p_tilde, opt.k, opt.matrix_trials, s, gcn)}) {
      r.name = c.name + "/" + r.name;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string report_to_json(const std::vector<BoundCheckReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BoundCheckReport& r : reports) {
    arr.push_back({{"name", r.name},
                   {"empirical_mean", r.empirical_mean},
                   {"stderr", r.stderr_mean},
                   {"lower_bound", r.lower_bound},
                   {"upper_bound", r.upper_bound},
                   {"epsilon_used", r.epsilon_used},
                   {"set_overlap_mean", r.set_overlap_mean},
                   {"alpha", r.alpha},
                   {"beta", r.beta},
                   {"trials", r.trials},
                   {"holds", r.holds}});
  }
  return nlohmann::json{{"schema_version", 1}, {"reports", arr}}.dump(2);
}

} // namespace gsparse
