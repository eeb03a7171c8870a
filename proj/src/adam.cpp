#include "gsparse/adam.hpp"

#include <cmath>

#include "gsparse/error.hpp"

namespace gsparse {

void adam_step(AdamState& state, const std::vector<ParamRef>& params, const std::vector<Matrix>& grads) {
  if (params.size() != grads.size()) throw Error("adam: parameter/gradient count mismatch");
  if (state.m.empty()) {
    for (const ParamRef& p : params) {
      state.m.push_back(Matrix::Zero(p.value->rows(), p.value->cols()));
      state.v.push_back(Matrix::Zero(p.value->rows(), p.value->cols()));
    }
  }
  if (state.m.size() != params.size()) throw Error("adam: parameter count changed between steps");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Matrix& g = grads[i];
    if (g.rows() != params[i].value->rows() || g.cols() != params[i].value->cols() ||
        g.rows() != state.m[i].rows() || g.cols() != state.m[i].cols()) {
      throw Error("adam: shape mismatch for parameter '" + params[i].name + "'");
    }
    if (g.hasNaN()) throw Error("adam: NaN gradient for parameter '" + params[i].name + "'");
  }

  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Matrix& g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g.cwiseProduct(g);
    auto mhat = state.m[i].array() / c1;
    auto vhat = state.v[i].array() / c2;
    params[i].value->array() -= state.lr * mhat / (vhat.sqrt() + state.eps);
  }
}

} // namespace gsparse
