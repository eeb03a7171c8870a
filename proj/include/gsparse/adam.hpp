#pragma once

#include <string>
#include <vector>

#include "gsparse/matrix.hpp"

namespace gsparse {

/// A named reference to a trainable matrix.
struct ParamRef {
  std::string name;
  Matrix* value;
};

/// Adam moments for an ordered list of parameters.
struct AdamState {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
};

/// One bias-corrected Adam update. Moments are created on the first call;
/// params and grads must line up with the shapes seen on that call.
void adam_step(AdamState& state, const std::vector<ParamRef>& params, const std::vector<Matrix>& grads);

} // namespace gsparse
