#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace rbm {

/// Lattice parameters of the band profile. `c_star` records the constant in
/// n = C_* W^2 when the lattice was built for a critical-regime experiment.
struct LatticeSpec {
  std::size_t n = 1;
  double w = 1.0;
  std::optional<double> c_star;

  /// Throws InvalidArgument unless n >= 1, W >= 1 and |n - c_star W^2| < 1.
  void validate() const;

  /// n = round(c_star * w^2).
  static LatticeSpec critical(double c_star, double w);
};

/// Symmetric tridiagonal matrix stored by its diagonal and off-diagonal.
struct SymmetricTridiagonal {
  Eigen::VectorXd diag;
  Eigen::VectorXd offdiag;  // size n-1 (empty for n = 1)

  std::size_t size() const { return static_cast<std::size_t>(diag.size()); }
  Eigen::MatrixXd dense() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
};

/// Discrete Laplacian on {1..n} with reflecting (Neumann) ends:
/// interior rows (1,-2,1), boundary diagonals -1, so that Laplacian * 1 = 0.
SymmetricTridiagonal build_neumann_laplacian(std::size_t n);

/// The variance profile J = (-W^2 Laplacian + 1)^{-1}. Immutable after
/// construction.
class CovarianceProfile {
 public:
  CovarianceProfile(LatticeSpec spec, Eigen::MatrixXd entries)
      : spec_(std::move(spec)), entries_(std::move(entries)) {}

  const LatticeSpec& spec() const { return spec_; }
  const Eigen::MatrixXd& entries() const { return entries_; }
  std::size_t n() const { return spec_.n; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// max |(-W^2 Laplacian + 1) J - I|.
  double identity_residual() const;
  /// max_i |sum_j J_ij - 1|.
  double row_sum_error() const;
  /// max |J - J^T|.
  double symmetry_error() const;
  /// True when an LLT factorization of J succeeds.
  bool positive_definite() const;

 private:
  LatticeSpec spec_;
  Eigen::MatrixXd entries_;
};

/// Column-by-column tridiagonal solve of (-W^2 Laplacian + 1) J = I.
CovarianceProfile build_covariance(const LatticeSpec& spec);

/// (k, max_i J_{i,i+k} / J_{i,i}) for k = 0..n-1.
std::vector<std::pair<std::size_t, double>> decay_profile(const CovarianceProfile& profile);

}  // namespace rbm
