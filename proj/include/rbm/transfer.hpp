#pragma once

#include <complex>

#include <Eigen/Core>

namespace rbm {

/// Coordinates of X in Herm(2): X = [[a, (x + iy)/sqrt2], [(x - iy)/sqrt2, b]].
struct Herm2Point {
  double a = 0.0;
  double b = 0.0;
  double x = 0.0;
  double y = 0.0;

  Eigen::Matrix2cd matrix() const;
  static Herm2Point from_matrix(const Eigen::Matrix2cd& m);
};

/// g(x) = (x + ie/2)^2 / 2 - log(x - ie/2) - C_+ (principal log), so that
/// g(a_+) = 0. SingularPoint at e = 0, x = 0.
std::complex<double> g_of(double x, double e);

/// Saddle-normalized weight
///   F(X) = exp{ -Tr (X + ie/2)^2 / 4 + log det(X - ie/2) / 2 + C_+ },
/// equal in modulus to 1 on X_+, X_- and the surface a_+ U L U^*, and at most
/// 1 on Herm(2). The log det uses the principal branch. Throws SingularPoint
/// when X - ie/2 is singular.
std::complex<double> curly_f(const Eigen::Matrix2cd& x, double e);
std::complex<double> curly_f(const Herm2Point& p, double e);

/// True when det(X - ie/2) lies on the negative real axis, where the
/// principal log det is discontinuous.
bool on_log_branch_cut(const Eigen::Matrix2cd& x, double e);

/// A(x, y) = (2 pi)^{-1/2} W e^{-g(x)/2} e^{-W^2 (x - y)^2 / 2} e^{-g(y)/2}.
std::complex<double> a_kernel(double x, double y, double e, double w);

/// Trapezoidal Nystrom discretization of A on a uniform grid of
/// [-half_width, half_width], symmetrized as diag(sqrt q) A diag(sqrt q) with
/// q the trapezoid weights (same spectrum as A diag(q)).
struct AKernelMatrix {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXd grid;
  double spacing = 0.0;
};

/// Requires nodes >= 200, half_width > |a_+-| and spacing <= 1/(4W).
AKernelMatrix a_kernel_nystrom(double e, double w, double half_width = 3.0, int nodes = 400);

}  // namespace rbm
