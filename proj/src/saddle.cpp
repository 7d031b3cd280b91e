#include "rbm/saddle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "rbm/charpoly.hpp"
#include "rbm/errors.hpp"

namespace rbm {

using namespace std::complex_literals;

SaddleData SaddleData::at(double e) {
  if (!(std::abs(e) < 2.0)) throw DomainError("saddle data needs |e| < 2");
  SaddleData s;
  s.e = e;
  s.rho = semicircle_rho(e);
  s.a_plus = std::sqrt(1.0 - e * e / 4.0);
  s.a_minus = -s.a_plus;
  s.t_star = (s.a_plus - s.a_minus) * (s.a_plus - s.a_minus);
  const double root = std::sqrt(4.0 - e * e);
  s.c_plus = s.a_plus * (root + 1i * e) / 2.0;
  s.c_minus = s.a_plus * (root - 1i * e) / 2.0;
  const std::complex<double> shifted = s.a_plus + 1i * e / 2.0;
  s.big_c_plus = shifted * shifted / 2.0 - std::log(s.a_plus - 1i * e / 2.0);
  return s;
}

double SaddleData::crossover_constant(double c_star) const {
  const double scale = 2.0 * std::numbers::pi * rho;
  return c_star / (scale * scale);
}

Eigen::Matrix2cd SaddleData::x_plus() const {
  return a_plus * Eigen::Matrix2cd::Identity();
}

Eigen::Matrix2cd SaddleData::x_minus() const {
  return a_minus * Eigen::Matrix2cd::Identity();
}

Eigen::Matrix2cd SaddleData::x_surface(const Eigen::Matrix2cd& u) const {
  Eigen::Matrix2cd l = Eigen::Matrix2cd::Zero();
  l(0, 0) = 1.0;
  l(1, 1) = -1.0;
  return a_plus * u * l * u.adjoint();
}

Eigen::Matrix2cd unitary_from_angles(double phi, double theta) {
  const std::complex<double> phase = std::polar(1.0, theta);
  Eigen::Matrix2cd u;
  u << std::cos(phi), std::sin(phi) * phase, -std::sin(phi) * std::conj(phase), std::cos(phi);
  return u;
}

Eigen::Matrix2cd haar_coset_unitary(Engine& engine) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = std::sqrt(unit(engine));
  const double theta = 2.0 * std::numbers::pi * unit(engine);
  return unitary_from_angles(std::asin(u), theta);
}

}  // namespace rbm
