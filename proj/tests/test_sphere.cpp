#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rbm/errors.hpp"
#include "rbm/quadrature.hpp"
#include "rbm/sphere.hpp"

using namespace rbm;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

// Classical RK4 for v' = -G v on [0, 1].
Eigen::VectorXcd rk4_flow(const Eigen::MatrixXcd& g, Eigen::VectorXcd v, int steps) {
  const double h = 1.0 / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXcd k1 = -g * v;
    const Eigen::VectorXcd k2 = -g * (v + 0.5 * h * k1);
    const Eigen::VectorXcd k3 = -g * (v + 0.5 * h * k2);
    const Eigen::VectorXcd k4 = -g * (v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

// (1/2) int exp(-i pi xi c) dc = sin(pi xi) / (pi xi).
double sinc_pi(double xi) { return xi == 0.0 ? 1.0 : std::sin(pi * xi) / (pi * xi); }

}  // namespace

TEST_CASE("Gauss-Legendre rule") {
  const auto rule = gauss_legendre(20);
  CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
  for (int k = 1; k < 20; ++k) CHECK(rule.nodes[k] > rule.nodes[k - 1]);
  // Exact for x^38.
  double moment = 0;
  for (int k = 0; k < 20; ++k) moment += rule.weights[k] * std::pow(rule.nodes[k], 38);
  CHECK(moment == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
  CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument);

  const auto p = legendre_values(3, 0.5);
  CHECK(p[2] == doctest::Approx(-0.125));
  CHECK(p[3] == doctest::Approx(-0.4375));
}

TEST_CASE("Legendre basis") {
  for (int order : {8, 16, 64}) {
    const auto basis = LegendreBasis::make(order);
    CHECK(basis.orthonormality_defect() < 1e-12);
    CHECK(basis.couplings().size() == order);
  }
  CHECK(LegendreBasis::coupling(0) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(LegendreBasis::coupling(1000) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("generator structure") {
  const auto g0 = build_generator(1.0, 0.0, 0.0, 16);
  CHECK(g0.c_star_eff == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g0.diag[0] == 0.0);
  CHECK(g0.diag[3] == doctest::Approx(0.25 * 12));
  CHECK(g0.offdiag.cwiseAbs().maxCoeff() == 0.0);

  const auto free = build_generator(0.0, 0.5, 2.0, 8);
  CHECK(free.diag.cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(free.offdiag[0] - cd(0.0, 2.0 * pi / std::sqrt(3.0))) < 1e-14);
  CHECK(free.dense().rows() == 9);

  CHECK_THROWS_AS(build_generator(1.0, 2.0, 1.0, 16), DomainError);
  CHECK_THROWS_AS(build_generator(-1.0, 0.0, 1.0, 16), InvalidArgument);
  CHECK_THROWS_AS(build_generator(1.0, 0.0, 1.0, 7), InvalidArgument);
}

TEST_CASE("matrix exponential action") {
  const Eigen::VectorXcd v = Eigen::VectorXcd::LinSpaced(6, 1.0, 6.0);
  CHECK(expm_apply(Eigen::MatrixXcd::Zero(6, 6), v) == v);

  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(6, 6);
  for (int k = 0; k < 6; ++k) d(k, k) = cd(0.5 * k, -0.3 * k);
  const auto out = expm_apply(d, v);
  for (int k = 0; k < 6; ++k) CHECK(std::abs(out[k] - std::exp(-d(k, k)) * v[k]) < 1e-14 * std::abs(v[k]));

  CHECK_THROWS_AS(expm_apply(Eigen::MatrixXcd::Zero(3, 4), Eigen::VectorXcd::Zero(4)), InvalidArgument);
}

TEST_CASE("matrix exponential matches an RK4 flow on random tridiagonal generators") {
  std::mt19937_64 gen(2718);
  std::uniform_real_distribution<double> diag(0.0, 10.0);
  std::uniform_real_distribution<double> off(-10.0, 10.0);
  for (int trial = 0; trial < 8; ++trial) {
    const int dim = 33;
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) g(k, k) = diag(gen);
    for (int k = 0; k + 1 < dim; ++k) g(k, k + 1) = g(k + 1, k) = cd(0.0, off(gen));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[0] = 1.0;
    const auto a = expm_apply(g, v);
    const auto b = rk4_flow(g, v, 4000);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("limit at xi = 0 is exactly one") {
  for (double c : {0.0, 0.01, 1.0, 100.0}) {
    const auto v = limit_formula(c, 0.3, 0.0);
    CHECK(v.value == cd(1.0, 0.0));
    CHECK(v.converged);
  }
}

TEST_CASE("free limit is the sinc transform of the uniform measure") {
  for (double xi : {0.25, 0.5, 1.0, 1.5, 2.5, 4.0}) {
    CAPTURE(xi);
    const auto v = limit_formula(0.0, 0.0, xi);
    CHECK(v.converged);
    CHECK(std::abs(v.value - sinc_pi(xi)) < 1e-10);
  }
  const auto tiny = limit_formula(1e-6, 0.0, 1.0);
  CHECK(std::abs(tiny.value) < 1e-3);
  CHECK(std::abs(limit_formula(1e-6, 0.0, 0.5).value.real() - 2.0 / pi) < 1e-4);
}

TEST_CASE("limit values at C_* = 1, E = 0") {
  // Reference values from an independent scipy expm of the L = 128 truncation.
  CHECK(limit_formula(1.0, 0.0, 0.5).value.real() == doctest::Approx(0.6848859711871593).epsilon(1e-10));
  CHECK(limit_formula(1.0, 0.0, 1.0).value.real() == doctest::Approx(0.08542562151975824).epsilon(1e-9));
  CHECK(limit_formula(1.0, 0.0, 1.5).value.real() == doctest::Approx(-0.20906972980047467).epsilon(1e-9));
}

TEST_CASE("limit at large C_*") {
  const auto v = limit_formula(100.0, 0.0, 1.0);
  CHECK(v.value.real() == doctest::Approx(0.9374969390801869).epsilon(1e-10));
  // Second order in xi with C* = 25: only phi_1 couples to phi_0 (a_0^2 = 1/3, gap 2 C*).
  const double k = 50.0;
  const double second = 1.0 - (pi * pi / 3.0) * (1.0 / k - (1.0 - std::exp(-k)) / (k * k));
  CHECK(std::abs(v.value.real() - second) < 5e-3);
}

TEST_CASE("limit invariants over random parameters") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> log_c(-3.0, 3.0);
  std::uniform_real_distribution<double> energy(-1.9, 1.9);
  std::uniform_real_distribution<double> xi_d(0.0, 5.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double c = std::pow(10.0, log_c(gen));
    const double e = energy(gen);
    const double xi = xi_d(gen);
    CAPTURE(c);
    CAPTURE(e);
    CAPTURE(xi);
    const auto v = limit_formula(c, e, xi);
    CHECK(v.converged);
    CHECK(std::abs(v.value.imag()) < 1e-12);
    CHECK(std::abs(v.value.real()) <= 1.0 + 1e-12);
    CHECK(std::abs(limit_formula(c, e, -xi).value - v.value) < 1e-12);
    CHECK(std::abs(limit_formula(c, -e, xi).value - v.value) < 1e-12);

    const auto g = build_generator(c, e, xi, 2 * v.order_used);
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(g.dim());
    e0[0] = 1.0;
    CHECK(std::abs(expm_apply(g, e0)[0] - v.value) < 1e-10);
  }
}

TEST_CASE("Funk-Hecke spectrum") {
  const auto l0 = funk_hecke_eigs(1.0, std::sqrt(10.0), 0, 64);
  CHECK(l0.lambda[0] == doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-12));
  CHECK(!l0.warning);

  for (double s : {0.5, 2.0, 5.0, 25.0, 50.0}) {
    CAPTURE(s);
    const auto spec = funk_hecke_eigs(2.0 * s, 1.0, 1, 128);
    const double closed = 1.0 - 1.0 / s + std::exp(-2.0 * s) * (1.0 + 1.0 / s);
    CHECK(spec.lambda[1] == doctest::Approx(closed).epsilon(1e-10));
  }

  // W^2 t = 100 reference values (mpmath).
  const auto spec = funk_hecke_eigs(4.0, 5.0, 5, 128);
  CHECK(spec.lambda[2] == doctest::Approx(0.9412).epsilon(1e-10));
  CHECK(spec.lambda[3] == doctest::Approx(0.88588).epsilon(1e-10));
  CHECK(spec.lambda[5] == doctest::Approx(0.738788176).epsilon(1e-9));
  for (int j = 0; j <= 5; ++j) {
    const double a = kstar_asymptotic_eigenvalue(4.0, 5.0, j);
    CHECK(std::abs(spec.lambda[j] - a) <= 5.0 * j * j / 100.0 * std::abs(a) + 1e-12);
  }

  for (double s : {1.0, 10.0, 100.0}) {
    CAPTURE(s);
    const auto sp = funk_hecke_eigs(s, 1.0, 10, 64);
    for (int j = 0; j <= 10; ++j) CHECK(sp.lambda[j] > 0.0);
    for (int j = 1; j <= 10; ++j) CHECK(sp.lambda[j] < sp.lambda[j - 1]);
  }

  CHECK(funk_hecke_eigs(4.0, 5.0, 10, 20).warning.has_value());
  CHECK_THROWS_AS(funk_hecke_eigs(0.0, 5.0, 3, 64), InvalidArgument);
  CHECK_THROWS_AS(funk_hecke_eigs(1.0, 5.0, -1, 64), InvalidArgument);
}

TEST_CASE("zonal Nystrom matrix reproduces the Funk-Hecke eigenpairs") {
  CHECK_THROWS_AS(zonal_nystrom(1.0, 2.0, 32), InvalidArgument);

  const auto m10 = zonal_nystrom(10.0, 1.0, 96);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(96);
  CHECK((m10.matrix * ones - (1.0 - std::exp(-10.0)) * ones).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(m10.matrix.minCoeff() >= 0.0);
  CHECK(m10.matrix.rowwise().sum().maxCoeff() <= (1.0 - std::exp(-10.0)) * (1.0 + 1e-6));

  const auto m = zonal_nystrom(50.0, 1.0, 128, 512);
  const auto fh = funk_hecke_eigs(50.0, 1.0, 10, 128);
  for (int j = 0; j <= 10; ++j) {
    CAPTURE(j);
    Eigen::VectorXd p(128);
    for (int a = 0; a < 128; ++a) p[a] = legendre_values(j, m.nodes[a])[j];
    CHECK((m.matrix * p - fh.lambda[j] * p).cwiseAbs().maxCoeff() < 1e-6);
  }
}
