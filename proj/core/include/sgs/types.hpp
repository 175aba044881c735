#pragma once

#include <Eigen/Dense>

namespace sgs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Family { Gaussian, Binomial };

} // namespace sgs
