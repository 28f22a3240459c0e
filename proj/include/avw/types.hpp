#pragma once

#include <Eigen/Core>

namespace avw {

/// Observations are rows; row-major keeps each point contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace avw
