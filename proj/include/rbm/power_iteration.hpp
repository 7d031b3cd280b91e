#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

namespace rbm {

struct PowerIterationOptions {
  double tolerance = 1e-8;          // relative residual |Mv - lv| / |l|
  int max_power_iterations = 2000;
  double refine_below = 1e-3;       // switch to Rayleigh-quotient iteration
  int max_refinement_iterations = 100;
};

struct EigenEstimate {
  std::complex<double> value;
  Eigen::VectorXcd vector;
  int power_iterations = 0;
  int refinement_iterations = 0;
  double residual = 0.0;
  /// sqrt(|M^2 v|) for the last power iterate; tracks the dominant modulus
  /// even when several eigenvalues share it.
  double modulus_estimate = 0.0;
  bool converged = false;
};

/// Eigenvalue of largest modulus. Power iteration from a fixed start vector,
/// then Rayleigh-quotient (shift-invert) refinement once the residual is small
/// or the power phase stalls. Ties in modulus resolve to whichever eigenvalue
/// the refinement reaches first. Throws NumericalError with the residual when
/// the refinement does not converge.
EigenEstimate leading_eigenvalue(const Eigen::MatrixXcd& m, const PowerIterationOptions& options = {});

}  // namespace rbm
