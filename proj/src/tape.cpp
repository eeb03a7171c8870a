#include "gsparse/tape.hpp"

#include <cmath>
#include <string>

#include "gsparse/error.hpp"

namespace gsparse {

namespace {

constexpr double kLogClamp = 1e-12;
constexpr double kCosineEps = 1e-12;

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

} // namespace

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || v.id >= nodes_.size()) throw Error("tape: detached or invalid slot");
  return nodes_[v.id];
}

Var Tape::push(Matrix value, bool requires_grad, Backward backward) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::push_unary(Var x, Matrix value, Backward backward) {
  return push(std::move(value), node(x).requires_grad, std::move(backward));
}

template <typename Expr>
void Tape::accumulate(std::uint32_t id, const Expr& g) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

void Tape::accumulate(std::uint32_t id, Matrix&& g) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (n.grad.size() == 0) {
    n.grad = std::move(g);
  } else {
    n.grad += g;
  }
}

Matrix* Tape::grad_buffer(std::uint32_t id) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return nullptr;
  if (n.grad.size() == 0) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
  return &n.grad;
}

Var Tape::constant(Matrix value) { return push(std::move(value), false, {}); }

Var Tape::parameter(Matrix value) { return push(std::move(value), true, {}); }

const Matrix& Tape::value(Var v) const { return node(v).value; }

double Tape::scalar(Var v) const {
  const Matrix& m = value(v);
  if (m.size() != 1) throw Error("tape: slot is " + shape(m) + ", not a scalar");
  return m(0, 0);
}

Matrix Tape::grad(Var v) const {
  const Node& n = node(v);
  if (n.grad.size() == 0) return Matrix::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

Var Tape::matmul(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.cols() != bv.rows()) throw Error("matmul: shape mismatch " + shape(av) + " * " + shape(bv));
  Matrix out = av * bv;
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(out), rg, [a, b](Tape& t, const Matrix& g) {
    if (t.nodes_[a.id].requires_grad) {
      Matrix da;
      da.noalias() = g * t.nodes_[b.id].value.transpose();
      t.accumulate(a.id, std::move(da));
    }
    if (t.nodes_[b.id].requires_grad) {
      Matrix db;
      db.noalias() = t.nodes_[a.id].value.transpose() * g;
      t.accumulate(b.id, std::move(db));
    }
  });
}

Var Tape::add(Var a, Var b) {
  require_same_shape(value(a), value(b), "add");
  Matrix out = value(a) + value(b);
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(out), rg, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a.id, g);
    t.accumulate(b.id, g);
  });
}

Var Tape::sub(Var a, Var b) {
  require_same_shape(value(a), value(b), "sub");
  Matrix out = value(a) - value(b);
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(out), rg, [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a.id, g);
    t.accumulate(b.id, -g);
  });
}

Var Tape::mul(Var a, Var b) {
  require_same_shape(value(a), value(b), "mul");
  Matrix out = value(a).cwiseProduct(value(b));
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(out), rg, [a, b](Tape& t, const Matrix& g) {
    if (t.nodes_[a.id].requires_grad) t.accumulate(a.id, g.cwiseProduct(t.nodes_[b.id].value));
    if (t.nodes_[b.id].requires_grad) t.accumulate(b.id, g.cwiseProduct(t.nodes_[a.id].value));
  });
}

Var Tape::scale(Var a, double s) {
  return push_unary(a, value(a) * s, [a, s](Tape& t, const Matrix& g) { t.accumulate(a.id, g * s); });
}

Var Tape::add_bias(Var x, Var bias) {
  const Matrix& xv = value(x);
  const Matrix& bv = value(bias);
  if (bv.rows() != 1 || bv.cols() != xv.cols()) {
    throw Error("add_bias: bias " + shape(bv) + " does not match " + shape(xv));
  }
  Matrix out = xv.rowwise() + bv.row(0);
  const bool rg = node(x).requires_grad || node(bias).requires_grad;
  return push(std::move(out), rg, [x, bias](Tape& t, const Matrix& g) {
    t.accumulate(x.id, g);
    if (t.nodes_[bias.id].requires_grad) t.accumulate(bias.id, Matrix(g.colwise().sum()));
  });
}

Var Tape::relu(Var x) {
  Matrix out = value(x).cwiseMax(0.0);
  return push_unary(x, std::move(out), [x](Tape& t, const Matrix& g) {
    const Matrix& xv = t.nodes_[x.id].value;
    t.accumulate(x.id, Matrix((xv.array() > 0.0).select(g, 0.0)));
  });
}

Var Tape::sigmoid(Var x) {
  Matrix out = value(x).unaryExpr(&stable_sigmoid);
  const std::uint32_t self = static_cast<std::uint32_t>(nodes_.size());
  return push_unary(x, std::move(out), [x, self](Tape& t, const Matrix& g) {
    const Matrix& s = t.nodes_[self].value;
    t.accumulate(x.id, Matrix(g.array() * s.array() * (1.0 - s.array())));
  });
}

Var Tape::abs(Var x) {
  Matrix out = value(x).cwiseAbs();
  return push_unary(x, std::move(out), [x](Tape& t, const Matrix& g) {
    const Matrix& xv = t.nodes_[x.id].value;
    Matrix sign = xv.unaryExpr([](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
    t.accumulate(x.id, Matrix(g.cwiseProduct(sign)));
  });
}

Var Tape::row_softmax(Var x) {
  const Matrix& xv = value(x);
  Matrix out(xv.rows(), xv.cols());
  for (Eigen::Index i = 0; i < xv.rows(); ++i) {
    const double mx = xv.row(i).maxCoeff();
    out.row(i) = (xv.row(i).array() - mx).exp();
    out.row(i) /= out.row(i).sum();
  }
  const std::uint32_t self = static_cast<std::uint32_t>(nodes_.size());
  return push_unary(x, std::move(out), [x, self](Tape& t, const Matrix& g) {
    const Matrix& y = t.nodes_[self].value;
    Vector dots = g.cwiseProduct(y).rowwise().sum();
    Matrix d = y.cwiseProduct(g - dots.replicate(1, g.cols()));
    t.accumulate(x.id, std::move(d));
  });
}

Var Tape::concat_cols(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  if (av.rows() != bv.rows()) throw Error("concat_cols: row mismatch " + shape(av) + " | " + shape(bv));
  Matrix out(av.rows(), av.cols() + bv.cols());
  out.leftCols(av.cols()) = av;
  out.rightCols(bv.cols()) = bv;
  const Eigen::Index ca = av.cols(), cb = bv.cols();
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(out), rg, [a, b, ca, cb](Tape& t, const Matrix& g) {
    if (t.nodes_[a.id].requires_grad) t.accumulate(a.id, Matrix(g.leftCols(ca)));
    if (t.nodes_[b.id].requires_grad) t.accumulate(b.id, Matrix(g.rightCols(cb)));
  });
}

Var Tape::gather_rows(Var x, std::vector<Eigen::Index> rows) {
  const Matrix& xv = value(x);
  Matrix out(static_cast<Eigen::Index>(rows.size()), xv.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= xv.rows()) throw Error("gather_rows: row index out of range");
    out.row(static_cast<Eigen::Index>(i)) = xv.row(rows[i]);
  }
  return push_unary(x, std::move(out), [x, rows = std::move(rows)](Tape& t, const Matrix& g) {
    Matrix* d = t.grad_buffer(x.id);
    if (!d) return;
    for (std::size_t i = 0; i < rows.size(); ++i) d->row(rows[i]) += g.row(static_cast<Eigen::Index>(i));
  });
}

Var Tape::row_block(Var x, Eigen::Index start, Eigen::Index count) {
  const Matrix& xv = value(x);
  if (start < 0 || count < 0 || start + count > xv.rows()) throw Error("row_block: rows out of range for " + shape(xv));
  Matrix out = xv.middleRows(start, count);
  return push_unary(x, std::move(out), [x, start, count](Tape& t, const Matrix& g) {
    if (Matrix* d = t.grad_buffer(x.id)) d->middleRows(start, count) += g;
  });
}

Var Tape::dropout(Var x, double rate, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0) throw Error("dropout rate must lie in [0,1)");
  if (rate == 0.0) return x;
  const Matrix& xv = value(x);
  Matrix mask(xv.rows(), xv.cols());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = uniform_open01(rng) < rate ? 0.0 : keep_scale;
  }
  Matrix out = xv.cwiseProduct(mask);
  return push_unary(x, std::move(out), [x, mask = std::move(mask)](Tape& t, const Matrix& g) {
    t.accumulate(x.id, Matrix(g.cwiseProduct(mask)));
  });
}

Var Tape::aggregate(std::shared_ptr<const AggregationGraph> graph, Var weights, Var x) {
  const Matrix& xv = value(x);
  const Matrix& wv = value(weights);
  const std::size_t n = graph->num_nodes;
  const std::size_t k = graph->edges.size();
  if (static_cast<std::size_t>(xv.rows()) != n) {
    throw Error("aggregate: features have " + std::to_string(xv.rows()) + " rows for " + std::to_string(n) + " nodes");
  }
  if (wv.cols() != 1 || static_cast<std::size_t>(wv.rows()) != k) {
    throw Error("aggregate: weights " + shape(wv) + " for " + std::to_string(k) + " edges");
  }

  std::vector<double> deg(n, 1.0);
  for (std::size_t e = 0; e < k; ++e) {
    const auto [u, v] = graph->edges[e];
    if (u >= n || v >= n || u == v) throw Error("aggregate: invalid edge");
    deg[u] += wv(static_cast<Eigen::Index>(e), 0);
    deg[v] += wv(static_cast<Eigen::Index>(e), 0);
  }
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(deg[i] > 0.0)) throw Error("aggregate: non-positive weighted degree at node " + std::to_string(i));
    inv_sqrt[i] = 1.0 / std::sqrt(deg[i]);
  }

  auto propagate = [graph, deg, inv_sqrt](const Matrix& in, const Matrix& w) {
    Matrix out(in.rows(), in.cols());
    for (Eigen::Index i = 0; i < in.rows(); ++i) out.row(i) = in.row(i) / deg[static_cast<std::size_t>(i)];
    for (std::size_t e = 0; e < graph->edges.size(); ++e) {
      const auto [u, v] = graph->edges[e];
      const double c = w(static_cast<Eigen::Index>(e), 0) * inv_sqrt[u] * inv_sqrt[v];
      out.row(u) += c * in.row(v);
      out.row(v) += c * in.row(u);
    }
    return out;
  };

  Matrix out = propagate(xv, wv);
  const bool rg = node(x).requires_grad || node(weights).requires_grad;
  return push(std::move(out), rg, [graph, weights, x, deg, inv_sqrt, propagate](Tape& t, const Matrix& g) {
    const Matrix& xv = t.nodes_[x.id].value;
    const Matrix& wv = t.nodes_[weights.id].value;
    // The normalized adjacency is symmetric, so its transpose-product is the same propagation.
    if (t.nodes_[x.id].requires_grad) t.accumulate(x.id, propagate(g, wv));
    if (!t.nodes_[weights.id].requires_grad) return;

    const std::size_t n = graph->num_nodes;
    const std::size_t k = graph->edges.size();
    // d(loss)/d(deg_i) collects the derivative of every normalized entry in row and column i.
    std::vector<double> ddeg(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      ddeg[i] = -g.row(r).dot(xv.row(r)) / (deg[i] * deg[i]);
    }
    std::vector<double> pair_dot(k);
    for (std::size_t e = 0; e < k; ++e) {
      const auto [u, v] = graph->edges[e];
      const double s = g.row(u).dot(xv.row(v)) + g.row(v).dot(xv.row(u));
      pair_dot[e] = s;
      const double sc = s * wv(static_cast<Eigen::Index>(e), 0) * inv_sqrt[u] * inv_sqrt[v];
      ddeg[u] -= sc / (2.0 * deg[u]);
      ddeg[v] -= sc / (2.0 * deg[v]);
    }
    Matrix dw(static_cast<Eigen::Index>(k), 1);
    for (std::size_t e = 0; e < k; ++e) {
      const auto [u, v] = graph->edges[e];
      dw(static_cast<Eigen::Index>(e), 0) = pair_dot[e] * inv_sqrt[u] * inv_sqrt[v] + ddeg[u] + ddeg[v];
    }
    t.accumulate(weights.id, std::move(dw));
  });
}

Var Tape::sum(Var x) {
  const Matrix& xv = value(x);
  Matrix out(1, 1);
  out(0, 0) = xv.sum();
  const Eigen::Index r = xv.rows(), c = xv.cols();
  return push_unary(x, std::move(out), [x, r, c](Tape& t, const Matrix& g) {
    t.accumulate(x.id, Matrix::Constant(r, c, g(0, 0)));
  });
}

Var Tape::mean(Var x) {
  const Matrix& xv = value(x);
  if (xv.size() == 0) throw Error("mean of an empty slot");
  return scale(sum(x), 1.0 / static_cast<double>(xv.size()));
}

Var Tape::weighted_sum(std::span<const Var> terms, std::span<const double> coefs) {
  if (terms.size() != coefs.size() || terms.empty()) throw Error("weighted_sum: term/coefficient mismatch");
  Matrix out = Matrix::Zero(1, 1);
  bool rg = false;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    out(0, 0) += coefs[i] * scalar(terms[i]);
    rg = rg || node(terms[i]).requires_grad;
  }
  std::vector<Var> ts(terms.begin(), terms.end());
  std::vector<double> cs(coefs.begin(), coefs.end());
  return push(std::move(out), rg, [ts, cs](Tape& t, const Matrix& g) {
    for (std::size_t i = 0; i < ts.size(); ++i) t.accumulate(ts[i].id, Matrix::Constant(1, 1, cs[i] * g(0, 0)));
  });
}

Var Tape::row_cosine(Var a, Var b) {
  const Matrix& av = value(a);
  const Matrix& bv = value(b);
  require_same_shape(av, bv, "row_cosine");
  const Eigen::Index k = av.rows();
  Matrix out(k, 1);
  std::vector<double> na(static_cast<std::size_t>(k)), nb(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    na[static_cast<std::size_t>(i)] = av.row(i).norm();
    nb[static_cast<std::size_t>(i)] = bv.row(i).norm();
    const double p = na[static_cast<std::size_t>(i)] * nb[static_cast<std::size_t>(i)];
    out(i, 0) = (na[static_cast<std::size_t>(i)] < kCosineEps || nb[static_cast<std::size_t>(i)] < kCosineEps)
                    ? 0.0
                    : av.row(i).dot(bv.row(i)) / p;
  }
  const std::uint32_t self = static_cast<std::uint32_t>(nodes_.size());
  const bool rg = node(a).requires_grad || node(b).requires_grad;
  return push(std::move(out), rg, [a, b, self, na, nb](Tape& t, const Matrix& g) {
    const Matrix& av = t.nodes_[a.id].value;
    const Matrix& bv = t.nodes_[b.id].value;
    const Matrix& c = t.nodes_[self].value;
    Matrix da = Matrix::Zero(av.rows(), av.cols());
    Matrix db = Matrix::Zero(bv.rows(), bv.cols());
    for (Eigen::Index i = 0; i < av.rows(); ++i) {
      const double x = na[static_cast<std::size_t>(i)], y = nb[static_cast<std::size_t>(i)];
      if (x < kCosineEps || y < kCosineEps) continue;
      const double gi = g(i, 0), ci = c(i, 0);
      da.row(i) = gi * (bv.row(i) / (x * y) - ci * av.row(i) / (x * x));
      db.row(i) = gi * (av.row(i) / (x * y) - ci * bv.row(i) / (y * y));
    }
    if (t.nodes_[a.id].requires_grad) t.accumulate(a.id, std::move(da));
    if (t.nodes_[b.id].requires_grad) t.accumulate(b.id, std::move(db));
  });
}

Var Tape::masked_nll(Var probs, std::span<const int> labels, std::span<const NodeId> rows) {
  const Matrix& p = value(probs);
  if (rows.empty()) throw Error("cross-entropy over an empty node mask");
  if (static_cast<Eigen::Index>(labels.size()) != p.rows()) throw Error("masked_nll: label count mismatch");
  double total = 0.0;
  for (NodeId r : rows) {
    const int y = labels[r];
    if (r >= p.rows() || y < 0 || y >= p.cols()) throw Error("masked_nll: index out of range");
    total -= std::log(std::max(p(r, y), kLogClamp));
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  Matrix out = Matrix::Constant(1, 1, total * inv);
  std::vector<NodeId> rs(rows.begin(), rows.end());
  std::vector<int> ys(labels.begin(), labels.end());
  return push_unary(probs, std::move(out), [probs, rs, ys, inv](Tape& t, const Matrix& g) {
    const Matrix& p = t.nodes_[probs.id].value;
    Matrix d = Matrix::Zero(p.rows(), p.cols());
    for (NodeId r : rs) {
      const double pv = p(r, ys[r]);
      if (pv > kLogClamp) d(r, ys[r]) -= g(0, 0) * inv / pv;
    }
    t.accumulate(probs.id, std::move(d));
  });
}

Var Tape::binary_cross_entropy(Var probs, std::vector<double> targets, bool one_sided, Reduction reduction) {
  const Matrix& p = value(probs);
  if (p.cols() != 1 || static_cast<std::size_t>(p.rows()) != targets.size()) {
    throw Error("binary_cross_entropy: " + shape(p) + " vs " + std::to_string(targets.size()) + " targets");
  }
  const std::size_t k = targets.size();
  const double lo = kLogClamp, hi = 1.0 - kLogClamp;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double pc = std::clamp(p(static_cast<Eigen::Index>(i), 0), lo, hi);
    total -= targets[i] * std::log(pc);
    if (!one_sided) total -= (1.0 - targets[i]) * std::log(1.0 - pc);
  }
  const double norm = (reduction == Reduction::mean && k > 0) ? 1.0 / static_cast<double>(k) : 1.0;
  Matrix out = Matrix::Constant(1, 1, total * norm);
  return push_unary(probs, std::move(out), [probs, targets = std::move(targets), one_sided, norm, lo, hi](Tape& t, const Matrix& g) {
    const Matrix& p = t.nodes_[probs.id].value;
    Matrix d = Matrix::Zero(p.rows(), 1);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double pv = p(static_cast<Eigen::Index>(i), 0);
      if (pv <= lo || pv >= hi) continue;
      double di = -targets[i] / pv;
      if (!one_sided) di += (1.0 - targets[i]) / (1.0 - pv);
      d(static_cast<Eigen::Index>(i), 0) = g(0, 0) * norm * di;
    }
    t.accumulate(probs.id, std::move(d));
  });
}

void Tape::backward(Var loss) {
  const Node& l = node(loss);
  if (l.value.size() != 1) throw Error("backward: loss slot is " + shape(l.value) + ", not a scalar");
  if (!l.requires_grad) throw Error("backward: loss does not depend on any parameter (detached slot)");
  for (Node& n : nodes_) n.grad.resize(0, 0);
  nodes_[loss.id].grad = Matrix::Ones(1, 1);
  for (std::uint32_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.backward || n.grad.size() == 0) continue;
    n.backward(*this, n.grad);
  }
  for (const Node& n : nodes_) {
    if (n.backward || n.grad.size() == 0) continue;
    if (!n.grad.allFinite()) throw Error("backward: non-finite gradient");
  }
}

} // namespace gsparse
