#pragma once

#include <Eigen/Dense>

namespace ltvi {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace ltvi
