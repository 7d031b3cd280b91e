#pragma once

#include <vector>

#include <Eigen/Core>

namespace rbm {

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

QuadratureRule gauss_legendre(int order);

/// P_0(x) .. P_{j_max}(x) by the three-term recurrence.
std::vector<double> legendre_values(int j_max, double x);

}  // namespace rbm
