#include "rbm/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include "rbm/errors.hpp"

namespace rbm {

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw InvalidArgument("quadrature order must be positive");
  // Boost returns the nonnegative zeros in ascending order.
  const std::vector<double> positive = boost::math::legendre_p_zeros<double>(order);
  QuadratureRule rule{Eigen::VectorXd(order), Eigen::VectorXd(order)};
  const auto half = static_cast<int>(positive.size());
  for (int k = 0; k < half; ++k) {
    const double x = positive[static_cast<std::size_t>(k)];
    const double dp = boost::math::legendre_p_prime(order, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // positive[k] fills slot (order - half + k); its mirror fills (half - 1 - k).
    rule.nodes(order - half + k) = x;
    rule.weights(order - half + k) = w;
    rule.nodes(half - 1 - k) = -x;
    rule.weights(half - 1 - k) = w;
  }
  return rule;
}

std::vector<double> legendre_values(int j_max, double x) {
  std::vector<double> p(static_cast<std::size_t>(j_max) + 1);
  p[0] = 1.0;
  if (j_max >= 1) p[1] = x;
  for (int j = 1; j < j_max; ++j) {
    p[static_cast<std::size_t>(j) + 1] =
        boost::math::legendre_next(static_cast<unsigned>(j), x, p[static_cast<std::size_t>(j)],
                                   p[static_cast<std::size_t>(j) - 1]);
  }
  return p;
}

}  // namespace rbm
