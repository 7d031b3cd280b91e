#include "rbm/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "rbm/errors.hpp"
#include "rbm/quadrature.hpp"
#include "rbm/saddle.hpp"

namespace rbm {

using namespace std::complex_literals;

double LegendreBasis::coupling(int j) {
  const double jj = j;
  return (jj + 1.0) / std::sqrt((2.0 * jj + 1.0) * (2.0 * jj + 3.0));
}

LegendreBasis LegendreBasis::make(int order) {
  if (order < 1) throw InvalidArgument("Legendre basis order must be >= 1");
  LegendreBasis basis;
  basis.order_ = order;
  basis.couplings_.resize(order);
  for (int j = 0; j < order; ++j) basis.couplings_(j) = coupling(j);

  // Basis values at quadrature nodes exact for degree 2 * (order + 1).
  const QuadratureRule rule = gauss_legendre(order + 2);
  const auto m = rule.nodes.size();
  Eigen::MatrixXd v(m, order + 1);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto p = legendre_values(order, rule.nodes(k));
    for (int j = 0; j <= order; ++j) v(k, j) = std::sqrt(2.0 * j + 1.0) * p[static_cast<std::size_t>(j)];
  }
  const Eigen::VectorXd half_w = rule.weights / 2.0;
  const Eigen::MatrixXd gram = v.transpose() * half_w.asDiagonal() * v;
  double defect = (gram - Eigen::MatrixXd::Identity(order + 1, order + 1)).cwiseAbs().maxCoeff();

  for (int j = 0; j < order; ++j) {
    Eigen::VectorXd lhs = rule.nodes.cwiseProduct(v.col(j));
    lhs -= basis.couplings_(j) * v.col(j + 1);
    if (j > 0) lhs -= basis.couplings_(j - 1) * v.col(j - 1);
    defect = std::max(defect, lhs.cwiseAbs().maxCoeff());
  }
  basis.defect_ = defect;
  return basis;
}

Eigen::MatrixXcd SphereGenerator::dense() const {
  const auto n = dim();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) g(j, j) = diag(j);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    g(j, j + 1) = offdiag(j);
    g(j + 1, j) = offdiag(j);
  }
  return g;
}

SphereGenerator build_generator(double c_star, double e, double xi, int order) {
  if (!(c_star >= 0.0) || !std::isfinite(c_star)) throw InvalidArgument("c_star must be >= 0");
  if (order < 8) throw InvalidArgument("generator order must be >= 8");
  if (!std::isfinite(xi)) throw InvalidArgument("xi must be finite");
  const SaddleData saddle = SaddleData::at(e);

  SphereGenerator g;
  g.c_star_eff = saddle.crossover_constant(c_star);
  g.xi = xi;
  g.diag.resize(order + 1);
  g.offdiag.resize(order);
  for (int j = 0; j <= order; ++j) g.diag(j) = g.c_star_eff * j * (j + 1.0);
  for (int j = 0; j < order; ++j) g.offdiag(j) = 1i * std::numbers::pi * xi * LegendreBasis::coupling(j);
  return g;
}

Eigen::VectorXcd expm_apply(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& v) {
  if (g.rows() != g.cols() || g.rows() != v.size()) {
    throw InvalidArgument("expm_apply: dimension mismatch");
  }
  const auto n = g.rows();
  bool diagonal = true;
  for (Eigen::Index j = 0; j < n && diagonal; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j && g(i, j) != 0.0) {
        diagonal = false;
        break;
      }
    }
  }
  if (diagonal) return (-g.diagonal().array()).exp().matrix().cwiseProduct(v);

  const Eigen::MatrixXcd minus_g = -g;
  const Eigen::MatrixXcd e = minus_g.exp();
  return e * v;
}

Eigen::VectorXcd expm_apply(const SphereGenerator& g, const Eigen::VectorXcd& v) {
  return expm_apply(g.dense(), v);
}

namespace {

std::complex<double> ground_component(double c_star, double e, double xi, int order) {
  const SphereGenerator g = build_generator(c_star, e, xi, order);
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(g.dim());
  e0(0) = 1.0;
  return expm_apply(g, e0)(0);
}

}  // namespace

LimitValue limit_formula(double c_star, double e, double xi, int start_order) {
  int order = std::clamp(start_order, 8, kMaxLimitOrder);
  std::complex<double> previous = ground_component(c_star, e, xi, order);
  while (order < kMaxLimitOrder) {
    const int next = std::min(2 * order, kMaxLimitOrder);
    const std::complex<double> current = ground_component(c_star, e, xi, next);
    const double change = std::abs(current - previous);
    order = next;
    previous = current;
    if (change < 1e-10) return {current, order, true, std::nullopt};
  }
  std::ostringstream msg;
  msg << "limit_formula not converged at order " << kMaxLimitOrder << " (c_star=" << c_star
      << ", e=" << e << ", xi=" << xi << ")";
  return {previous, order, false, msg.str()};
}

double ZonalKernel::operator()(double c) const {
  const double s = sharpness();
  return s * std::exp(-0.5 * s * (1.0 - c));
}

FunkHeckeSpectrum funk_hecke_eigs(double t, double w, int j_max, int quad_order) {
  if (!(t > 0.0)) throw InvalidArgument("t must be positive");
  if (!(w >= 1.0)) throw InvalidArgument("W must be >= 1");
  if (j_max < 0) throw InvalidArgument("j_max must be >= 0");
  if (quad_order < 1) throw InvalidArgument("quadrature order must be positive");

  FunkHeckeSpectrum out;
  if (quad_order < 4 * j_max) {
    std::ostringstream msg;
    msg << "quadrature order " << quad_order << " is below 4*j_max = " << 4 * j_max
        << "; high-j eigenvalues may be inaccurate";
    out.warning = msg.str();
  }
  const ZonalKernel kernel{t, w};
  const QuadratureRule rule = gauss_legendre(quad_order);
  out.lambda = Eigen::VectorXd::Zero(j_max + 1);
  for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
    const double c = rule.nodes(k);
    const double weight = 0.5 * rule.weights(k) * kernel(c);
    const auto p = legendre_values(j_max, c);
    for (int j = 0; j <= j_max; ++j) out.lambda(j) += weight * p[static_cast<std::size_t>(j)];
  }
  return out;
}

double kstar_asymptotic_eigenvalue(double t, double w, int j) {
  const double s = w * w * t;
  return -std::expm1(-s) * (1.0 - j * (j + 1.0) / s);
}

ZonalNystrom zonal_nystrom(double t, double w, int nodes, int angles) {
  if (nodes < 64) throw InvalidArgument("zonal Nystrom needs at least 64 nodes");
  if (angles < 256) throw InvalidArgument("zonal Nystrom needs at least 256 angles");
  if (!(t > 0.0) || !(w >= 1.0)) throw InvalidArgument("need t > 0 and W >= 1");

  const ZonalKernel kernel{t, w};
  const QuadratureRule rule = gauss_legendre(nodes);
  Eigen::VectorXd cos_theta(angles);
  for (int a = 0; a < angles; ++a) cos_theta(a) = std::cos(2.0 * std::numbers::pi * a / angles);
  const Eigen::VectorXd sines = (1.0 - rule.nodes.array().square()).sqrt();

  ZonalNystrom out{Eigen::MatrixXd(nodes, nodes), rule.nodes, rule.weights};
  for (int a = 0; a < nodes; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double base = rule.nodes(a) * rule.nodes(b);
      const double span = sines(a) * sines(b);
      double acc = 0.0;
      for (int k = 0; k < angles; ++k) acc += kernel(base + span * cos_theta(k));
      const double avg = acc / angles;
      out.matrix(a, b) = avg * rule.weights(b) / 2.0;
      out.matrix(b, a) = avg * rule.weights(a) / 2.0;
    }
  }
  return out;
}

}  // namespace rbm
