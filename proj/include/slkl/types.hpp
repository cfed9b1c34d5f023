#pragma once

#include <Eigen/Dense>

namespace slkl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// Row-per-example feature storage; rows are contiguous so a point is a span.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

} // namespace slkl
