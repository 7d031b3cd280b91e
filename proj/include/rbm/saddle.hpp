#pragma once

#include <complex>

#include <Eigen/Core>

#include "rbm/ensemble.hpp"

namespace rbm {

/// Constants fixed by the spectral centre e: the semicircle density, the two
/// saddle values a_+- = +-sqrt(1 - e^2/4), the curvatures
/// c_+- = a_+ (sqrt(4 - e^2) +- i e) / 2 of g at the saddles, the saddle value
/// t* = (a_+ - a_-)^2 = 4 pi^2 rho^2 of the polar coordinate t, and the
/// normalizing constant C_+ that makes g(a_+) = 0.
struct SaddleData {
  double e = 0.0;
  double rho = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  double t_star = 0.0;
  std::complex<double> c_plus;
  std::complex<double> c_minus;
  std::complex<double> big_c_plus;

  /// DomainError unless |e| < 2.
  static SaddleData at(double e);

  /// C* = C_* / (2 pi rho)^2.
  double crossover_constant(double c_star) const;

  Eigen::Matrix2cd x_plus() const;
  Eigen::Matrix2cd x_minus() const;
  /// a_+ U L U^* with L = diag(1, -1).
  Eigen::Matrix2cd x_surface(const Eigen::Matrix2cd& u) const;
};

/// U = [[cos phi, sin phi e^{i theta}], [-sin phi e^{-i theta}, cos phi]].
Eigen::Matrix2cd unitary_from_angles(double phi, double theta);

/// Haar draw on U(2)/U(1)xU(1): u = |sin phi| with u^2 uniform on [0, 1] and
/// theta uniform on [0, 2 pi), matching dU = pi^{-1} u du dtheta.
Eigen::Matrix2cd haar_coset_unitary(Engine& engine);

}  // namespace rbm
