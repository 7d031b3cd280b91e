#include "rbm/transfer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rbm/errors.hpp"
#include "rbm/saddle.hpp"

namespace rbm {

using namespace std::complex_literals;

Eigen::Matrix2cd Herm2Point::matrix() const {
  const std::complex<double> off = (x + 1i * y) / std::numbers::sqrt2;
  Eigen::Matrix2cd m;
  m << a, off, std::conj(off), b;
  return m;
}

Herm2Point Herm2Point::from_matrix(const Eigen::Matrix2cd& m) {
  const std::complex<double> off = m(0, 1) * std::numbers::sqrt2;
  return {m(0, 0).real(), m(1, 1).real(), off.real(), off.imag()};
}

namespace {

// Principal branch with arg in (-pi, pi]: a signed zero imaginary part is
// treated as +0 so the negative real axis maps to arg = +pi.
std::complex<double> on_principal_side(std::complex<double> z) {
  if (z.imag() == 0.0) z = {z.real(), 0.0};
  return z;
}

std::complex<double> principal_log(std::complex<double> z) { return std::log(on_principal_side(z)); }
std::complex<double> principal_sqrt(std::complex<double> z) { return std::sqrt(on_principal_side(z)); }

}  // namespace

std::complex<double> g_of(double x, double e) {
  if (x == 0.0 && e == 0.0) throw SingularPoint("g is singular at x = 0 when e = 0");
  const SaddleData s = SaddleData::at(e);
  const std::complex<double> shifted = x + 1i * e / 2.0;
  return shifted * shifted / 2.0 - principal_log(x - 1i * e / 2.0) - s.big_c_plus;
}

namespace {

std::complex<double> shifted_det(const Eigen::Matrix2cd& x, double e) {
  const Eigen::Matrix2cd m = x - (1i * e / 2.0) * Eigen::Matrix2cd::Identity();
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

}  // namespace

std::complex<double> curly_f(const Eigen::Matrix2cd& x, double e) {
  const SaddleData s = SaddleData::at(e);
  const std::complex<double> det = shifted_det(x, e);
  if (det == 0.0) throw SingularPoint("X - ie/2 is singular");
  const Eigen::Matrix2cd plus = x + (1i * e / 2.0) * Eigen::Matrix2cd::Identity();
  const std::complex<double> trace_sq = (plus * plus).trace();
  return std::exp(-trace_sq / 4.0 + principal_log(det) / 2.0 + s.big_c_plus);
}

std::complex<double> curly_f(const Herm2Point& p, double e) { return curly_f(p.matrix(), e); }

bool on_log_branch_cut(const Eigen::Matrix2cd& x, double e) {
  const std::complex<double> det = shifted_det(x, e);
  return det.real() < 0.0 && std::abs(det.imag()) <= 1e-14 * std::abs(det);
}

namespace {

// e^{-g(x)/2} written with a principal square root so that the zero of
// x - ie/2 at e = 0 is a regular point of the kernel.
std::complex<double> half_weight(double x, double e, std::complex<double> big_c_plus) {
  const std::complex<double> shifted = x + 1i * e / 2.0;
  return std::exp(-shifted * shifted / 4.0 + big_c_plus / 2.0) * principal_sqrt(x - 1i * e / 2.0);
}

}  // namespace

std::complex<double> a_kernel(double x, double y, double e, double w) {
  const SaddleData s = SaddleData::at(e);
  const double gauss = w / std::sqrt(2.0 * std::numbers::pi) * std::exp(-w * w * (x - y) * (x - y) / 2.0);
  return half_weight(x, e, s.big_c_plus) * gauss * half_weight(y, e, s.big_c_plus);
}

AKernelMatrix a_kernel_nystrom(double e, double w, double half_width, int nodes) {
  const SaddleData s = SaddleData::at(e);
  if (nodes < 200) throw InvalidArgument("A-kernel grid needs at least 200 nodes");
  if (!(w >= 1.0)) throw InvalidArgument("W must be >= 1");
  if (!(half_width > s.a_plus)) {
    throw InvalidArgument("A-kernel grid must contain both saddles a_+-");
  }
  const double spacing = 2.0 * half_width / (nodes - 1);
  if (spacing > 1.0 / (4.0 * w)) {
    throw InvalidArgument("A-kernel grid spacing " + std::to_string(spacing) +
                          " exceeds 1/(4W); use at least " +
                          std::to_string(static_cast<int>(std::ceil(8.0 * half_width * w)) + 1) +
                          " nodes");
  }

  AKernelMatrix out{Eigen::MatrixXcd(nodes, nodes), Eigen::VectorXd(nodes), spacing};
  Eigen::VectorXcd weight(nodes);
  for (int k = 0; k < nodes; ++k) {
    out.grid(k) = -half_width + k * spacing;
    const double trap = (k == 0 || k == nodes - 1) ? spacing / 2.0 : spacing;
    weight(k) = half_weight(out.grid(k), e, s.big_c_plus) * std::sqrt(trap);
  }
  const double norm = w / std::sqrt(2.0 * std::numbers::pi);
  for (int a = 0; a < nodes; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double d = out.grid(a) - out.grid(b);
      const std::complex<double> v = weight(a) * (norm * std::exp(-w * w * d * d / 2.0)) * weight(b);
      out.matrix(a, b) = v;
      out.matrix(b, a) = v;
    }
  }
  return out;
}

}  // namespace rbm
