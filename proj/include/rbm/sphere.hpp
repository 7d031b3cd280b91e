#pragma once

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace rbm {

/// Orthonormal Legendre basis phi_j = sqrt(2j+1) P_j(c) of zonal functions on
/// the sphere, with inner product int_{-1}^{1} . dc/2 (c = 1 - 2|U_12|^2).
/// Multiplication by c is tridiagonal in this basis with couplings
/// a_j = (j+1) / sqrt((2j+1)(2j+3)); the sphere Laplacian is diag(j(j+1)).
class LegendreBasis {
 public:
  /// Builds the basis of dimension order+1 and checks orthonormality and the
  /// three-term relation by Gauss-Legendre quadrature.
  static LegendreBasis make(int order);

  static double coupling(int j);

  int order() const { return order_; }
  const Eigen::VectorXd& couplings() const { return couplings_; }
  /// max |Gram - I| plus the largest residual of c phi_j = a_{j-1} phi_{j-1} + a_j phi_{j+1}.
  double orthonormality_defect() const { return defect_; }

 private:
  int order_ = 0;
  Eigen::VectorXd couplings_;
  double defect_ = 0.0;
};

/// Truncation of C* Laplacian + i pi xi c in the Legendre basis: real diagonal
/// C* j(j+1) and imaginary symmetric off-diagonal i pi xi a_j.
struct SphereGenerator {
  double c_star_eff = 0.0;
  double xi = 0.0;
  Eigen::VectorXd diag;
  Eigen::VectorXcd offdiag;

  Eigen::Index dim() const { return diag.size(); }
  Eigen::MatrixXcd dense() const;
};

/// c_star is the constant in n = c_star W^2; the generator uses
/// C* = c_star / (2 pi rho(e))^2. Requires c_star >= 0, |e| < 2, order >= 8.
SphereGenerator build_generator(double c_star, double e, double xi, int order);

/// exp(-G) v by Pade scaling-and-squaring on the dense matrix.
Eigen::VectorXcd expm_apply(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& v);
Eigen::VectorXcd expm_apply(const SphereGenerator& g, const Eigen::VectorXcd& v);

struct LimitValue {
  std::complex<double> value;
  int order_used = 0;
  bool converged = false;
  std::optional<std::string> warning;
};

inline constexpr int kMaxLimitOrder = 256;

/// (exp(-C* Laplacian - i pi xi c) 1, 1): component 0 of exp(-G) e_0. The
/// truncation order doubles from `start_order` until successive values agree
/// to 1e-10, capped at kMaxLimitOrder.
LimitValue limit_formula(double c_star, double e, double xi, int start_order = 16);

/// Zonal reduction of the unitary-group transfer kernel:
/// k(c) = W^2 t exp(-(W^2 t / 2)(1 - c)), c the cosine of the relative angle.
struct ZonalKernel {
  double t = 1.0;
  double w = 1.0;

  double sharpness() const { return w * w * t; }
  double operator()(double c) const;
};

struct FunkHeckeSpectrum {
  Eigen::VectorXd lambda;
  std::optional<std::string> warning;
};

/// lambda_j = (1/2) int k(c) P_j(c) dc for j = 0..j_max by Gauss-Legendre.
FunkHeckeSpectrum funk_hecke_eigs(double t, double w, int j_max, int quad_order);

/// (1 - e^{-W^2 t})(1 - j(j+1)/(W^2 t)), the large-W^2 t form.
double kstar_asymptotic_eigenvalue(double t, double w, int j);

/// Nystrom matrix of the kernel acting on zonal functions: Gauss-Legendre
/// nodes in c, kernel averaged over the relative azimuth by the trapezoidal
/// rule. M(a, b) = mean_theta k(c_a c_b + s_a s_b cos theta) * w_b / 2.
struct ZonalNystrom {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

ZonalNystrom zonal_nystrom(double t, double w, int nodes, int angles = 256);

}  // namespace rbm
