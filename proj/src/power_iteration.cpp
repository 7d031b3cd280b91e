#include "rbm/power_iteration.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "rbm/errors.hpp"

namespace rbm {

namespace {

struct Rayleigh {
  std::complex<double> value;
  double residual;  // relative
};

Rayleigh rayleigh(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& v, Eigen::VectorXcd& mv) {
  mv.noalias() = m * v;
  const std::complex<double> value = v.dot(mv);  // v normalized; dot conjugates v
  const double scale = std::max(std::abs(value), std::numeric_limits<double>::min());
  return {value, (mv - value * v).norm() / scale};
}

}  // namespace

EigenEstimate leading_eigenvalue(const Eigen::MatrixXcd& m, const PowerIterationOptions& options) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument("leading_eigenvalue needs a non-empty square matrix");
  }
  const auto n = m.rows();

  // Fixed, non-symmetric start vector so results are reproducible.
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {1.0 + 1.0 / (i + 1.0), 0.25 / (i + 2.0)};
  v.normalize();

  EigenEstimate out;
  Eigen::VectorXcd mv(n);
  Rayleigh rq = rayleigh(m, v, mv);
  double checkpoint = rq.residual;
  for (; out.power_iterations < options.max_power_iterations; ++out.power_iterations) {
    if (rq.residual <= options.tolerance) {
      out.value = rq.value;
      out.vector = v;
      out.residual = rq.residual;
      out.modulus_estimate = std::abs(rq.value);
      out.converged = true;
      return out;
    }
    if (rq.residual <= options.refine_below) break;
    // Stalled (modulus tie or tiny spectral gap): hand over to refinement.
    if (out.power_iterations > 0 && out.power_iterations % 50 == 0) {
      if (rq.residual > 0.9 * checkpoint) break;
      checkpoint = rq.residual;
    }
    const double norm = mv.norm();
    if (norm == 0.0) {
      // m v = 0 for the start vector: the matrix is nilpotent on this orbit.
      out.value = 0.0;
      out.vector = v;
      out.converged = true;
      return out;
    }
    v = mv / norm;
    rq = rayleigh(m, v, mv);
  }
  out.modulus_estimate = std::sqrt((m * mv).norm());

  // Rayleigh-quotient iteration from the current estimate.
  std::complex<double> shift = rq.value;
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);
  for (; out.refinement_iterations < options.max_refinement_iterations; ++out.refinement_iterations) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m - shift * identity);
    Eigen::VectorXcd y = lu.solve(v);
    const double ny = y.norm();
    if (!std::isfinite(ny) || ny == 0.0) break;  // shift hit an eigenvalue exactly
    v = y / ny;
    rq = rayleigh(m, v, mv);
    shift = rq.value;
    if (rq.residual <= options.tolerance) {
      // One polishing step; keep it only if it helps.
      Eigen::PartialPivLU<Eigen::MatrixXcd> polish(m - shift * identity);
      Eigen::VectorXcd z = polish.solve(v);
      const double nz = z.norm();
      if (std::isfinite(nz) && nz > 0.0) {
        Eigen::VectorXcd mz(n);
        const Eigen::VectorXcd candidate = z / nz;
        const Rayleigh better = rayleigh(m, candidate, mz);
        if (better.residual < rq.residual) {
          v = candidate;
          rq = better;
        }
      }
      ++out.refinement_iterations;
      break;
    }
  }

  out.value = rq.value;
  out.vector = v;
  out.residual = rq.residual;
  out.converged = rq.residual <= options.tolerance;
  if (!out.converged) {
    std::ostringstream msg;
    msg << "leading_eigenvalue did not converge: relative residual " << rq.residual << " after "
        << out.power_iterations << " power and " << out.refinement_iterations
        << " refinement iterations";
    throw NumericalError(msg.str());
  }
  return out;
}

}  // namespace rbm
