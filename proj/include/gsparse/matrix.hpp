#pragma once

#include <Eigen/Dense>

namespace gsparse {

// Row-major so that a row is a node embedding / an edge feature vector.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

} // namespace gsparse
