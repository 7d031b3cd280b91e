#include "rbm/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "rbm/errors.hpp"

namespace rbm {

void LatticeSpec::validate() const {
  if (n < 1) throw InvalidArgument("lattice size n must be at least 1");
  if (!(w >= 1.0) || !std::isfinite(w)) {
    throw InvalidArgument("bandwidth W must be a finite value >= 1, got " + std::to_string(w));
  }
  if (c_star) {
    if (!(*c_star > 0.0)) throw InvalidArgument("c_star must be positive");
    const double target = *c_star * w * w;
    if (!(std::abs(static_cast<double>(n) - target) < 1.0)) {
      throw InvalidArgument("n = " + std::to_string(n) + " is not within 1 of c_star*W^2 = " +
                            std::to_string(target));
    }
  }
}

LatticeSpec LatticeSpec::critical(double c_star, double w) {
  if (!(c_star > 0.0)) throw InvalidArgument("c_star must be positive");
  const double target = std::round(c_star * w * w);
  if (target < 1.0) throw InvalidArgument("c_star*W^2 rounds to zero sites");
  LatticeSpec spec{static_cast<std::size_t>(target), w, c_star};
  spec.validate();
  return spec;
}

Eigen::MatrixXd SymmetricTridiagonal::dense() const {
  const auto n = diag.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal() = diag;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = offdiag(i);
    m(i + 1, i) = offdiag(i);
  }
  return m;
}

Eigen::VectorXd SymmetricTridiagonal::apply(const Eigen::VectorXd& v) const {
  const auto n = diag.size();
  Eigen::VectorXd out = diag.cwiseProduct(v);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    out(i) += offdiag(i) * v(i + 1);
    out(i + 1) += offdiag(i) * v(i);
  }
  return out;
}

SymmetricTridiagonal build_neumann_laplacian(std::size_t n) {
  if (n == 0) throw InvalidArgument("Laplacian needs at least one site");
  const auto size = static_cast<Eigen::Index>(n);
  SymmetricTridiagonal lap;
  lap.diag = Eigen::VectorXd::Constant(size, -2.0);
  lap.offdiag = Eigen::VectorXd::Ones(size - 1);
  if (n == 1) {
    lap.diag(0) = 0.0;
  } else {
    lap.diag(0) = -1.0;
    lap.diag(size - 1) = -1.0;
  }
  return lap;
}

namespace {

SymmetricTridiagonal band_operator(const LatticeSpec& spec) {
  SymmetricTridiagonal op = build_neumann_laplacian(spec.n);
  const double w2 = spec.w * spec.w;
  op.diag = (-w2 * op.diag).array() + 1.0;
  op.offdiag *= -w2;
  return op;
}

}  // namespace

CovarianceProfile build_covariance(const LatticeSpec& spec) {
  spec.validate();
  const SymmetricTridiagonal op = band_operator(spec);
  const auto n = static_cast<Eigen::Index>(spec.n);

  // Thomas elimination, factored once and reused for every unit column.
  Eigen::VectorXd upper(std::max<Eigen::Index>(n - 1, 0));
  Eigen::VectorXd pivot(n);
  pivot(0) = op.diag(0);
  for (Eigen::Index i = 1; i < n; ++i) {
    upper(i - 1) = op.offdiag(i - 1) / pivot(i - 1);
    pivot(i) = op.diag(i) - op.offdiag(i - 1) * upper(i - 1);
  }

  Eigen::MatrixXd j(n, n);
  Eigen::VectorXd y(n);
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rhs = (i == col) ? 1.0 : 0.0;
      y(i) = (i == 0) ? rhs / pivot(0) : (rhs - op.offdiag(i - 1) * y(i - 1)) / pivot(i);
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) y(i) -= upper(i) * y(i + 1);
    j.col(col) = y;
  }
  return CovarianceProfile(spec, std::move(j));
}

double CovarianceProfile::identity_residual() const {
  const SymmetricTridiagonal op = band_operator(spec_);
  const auto n = entries_.rows();
  double worst = 0.0;
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::VectorXd r = op.apply(entries_.col(col));
    r(col) -= 1.0;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

double CovarianceProfile::row_sum_error() const {
  return (entries_.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

double CovarianceProfile::symmetry_error() const {
  return (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
}

bool CovarianceProfile::positive_definite() const {
  Eigen::LLT<Eigen::MatrixXd> llt(entries_);
  return llt.info() == Eigen::Success;
}

std::vector<std::pair<std::size_t, double>> decay_profile(const CovarianceProfile& profile) {
  const auto& j = profile.entries();
  const auto n = j.rows();
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(static_cast<std::size_t>(n));
  out.emplace_back(0, 1.0);
  for (Eigen::Index k = 1; k < n; ++k) {
    double best = 0.0;
    for (Eigen::Index i = 0; i + k < n; ++i) best = std::max(best, j(i, i + k) / j(i, i));
    out.emplace_back(static_cast<std::size_t>(k), best);
  }
  return out;
}

}  // namespace rbm
