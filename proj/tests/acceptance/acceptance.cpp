// Acceptance gate: runs the ten end-to-end criteria and prints one verdict line each.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rbm/charpoly.hpp"
#include "rbm/covariance.hpp"
#include "rbm/ensemble.hpp"
#include "rbm/experiment.hpp"
#include "rbm/quadrature.hpp"
#include "rbm/saddle.hpp"
#include "rbm/sphere.hpp"
#include "rbm/transfer.hpp"

using namespace rbm;
using std::numbers::pi;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double sinc_pi(double xi) { return xi == 0.0 ? 1.0 : std::sin(pi * xi) / (pi * xi); }

struct CsvRow {
  std::vector<double> cells;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    CsvRow row;
    std::istringstream cells(line);
    for (std::string cell; std::getline(cells, cell, ',');) row.cells.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- 1 ---------------------------------------------------------------------

Verdict covariance_identities() {
  Verdict v;
  double worst_identity = 0.0, worst_rows = 0.0;
  for (auto [n, w] : {std::pair<std::size_t, double>{64, 8.0}, {256, 4.0}, {400, 20.0}}) {
    const auto j = build_covariance({n, w, {}});
    worst_identity = std::max(worst_identity, j.identity_residual());
    worst_rows = std::max(worst_rows, j.row_sum_error());
  }
  v.pass = worst_identity <= 1e-10 && worst_rows <= 1e-10;
  v.detail = "max identity residual " + sci(worst_identity) + ", max row-sum error " + sci(worst_rows);
  return v;
}

// --- 2 ---------------------------------------------------------------------

Verdict sampler_law() {
  const auto j = build_covariance({8, 2.0, {}});
  const auto m = empirical_covariance(sample_many(j, {20240, 0}, 20000));
  double worst = 0.0;
  for (Eigen::Index a = 0; a < 8; ++a) {
    for (Eigen::Index b = 0; b < 8; ++b) {
      worst = std::max(worst, std::abs(m.mean_abs_square(a, b) - j.entries()(a, b)) / m.abs_square_stderr(a, b));
      if (a == b) continue;
      worst = std::max(worst, std::abs(m.mean_square(a, b).real()) / m.square_stderr(a, b).real());
      worst = std::max(worst, std::abs(m.mean_square(a, b).imag()) / m.square_stderr(a, b).imag());
    }
  }
  return {worst <= 5.0, "largest deviation " + sci(worst) + " standard errors"};
}

// --- 3 ---------------------------------------------------------------------

Verdict saddle_normalization() {
  Engine engine = SeedRecord{3, 0}.engine();
  double worst = 0.0;
  for (double e : {0.0, 0.5, 1.0}) {
    const auto s = SaddleData::at(e);
    worst = std::max(worst, std::abs(std::abs(curly_f(s.x_plus(), e)) - 1.0));
    worst = std::max(worst, std::abs(std::abs(curly_f(s.x_minus(), e)) - 1.0));
    for (int k = 0; k < 100; ++k) {
      worst = std::max(worst, std::abs(std::abs(curly_f(s.x_surface(haar_coset_unitary(engine)), e)) - 1.0));
    }
  }
  return {worst <= 1e-12, "max ||F| - 1| " + sci(worst)};
}

// --- 4 ---------------------------------------------------------------------

Verdict kstar_spectrum() {
  Verdict v;
  double err0 = 0.0, err1 = 0.0;
  for (double sharp : {1.0, 10.0, 50.0, 100.0, 400.0}) {
    const auto spec = funk_hecke_eigs(sharp / 4.0, 2.0, 1, 256);
    const double s = sharp / 2.0;
    err0 = std::max(err0, std::abs(spec.lambda[0] - (1.0 - std::exp(-sharp))));
    err1 = std::max(err1, std::abs(spec.lambda[1] - (1.0 - 1.0 / s + std::exp(-2.0 * s) * (1.0 + 1.0 / s))));
  }

  const auto spec = funk_hecke_eigs(4.0, 5.0, 5, 128);  // W^2 t = 100
  double asym_ratio = 0.0;
  for (int j = 1; j <= 5; ++j) {
    const double a = kstar_asymptotic_eigenvalue(4.0, 5.0, j);
    asym_ratio = std::max(asym_ratio, (std::abs(spec.lambda[j] - a) / std::abs(a)) / (5.0 * j * j / 100.0));
  }
  asym_ratio = std::max(asym_ratio, std::abs(spec.lambda[0] - kstar_asymptotic_eigenvalue(4.0, 5.0, 0)) / 1e-12);

  const auto ny = zonal_nystrom(50.0, 1.0, 128, 512);
  const auto fh = funk_hecke_eigs(50.0, 1.0, 10, 128);
  double nystrom = 0.0;
  for (int j = 0; j <= 10; ++j) {
    Eigen::VectorXd p(ny.nodes.size());
    for (Eigen::Index a = 0; a < p.size(); ++a) p[a] = legendre_values(j, ny.nodes[a])[j];
    nystrom = std::max(nystrom, (ny.matrix * p - fh.lambda[j] * p).cwiseAbs().maxCoeff());
  }

  v.pass = err0 <= 1e-10 && err1 <= 1e-10 && asym_ratio <= 1.0 && nystrom <= 1e-6;
  v.detail = "lambda0 err " + sci(err0) + ", lambda1 err " + sci(err1) + ", asymptotic dev/budget " +
             sci(asym_ratio) + ", Nystrom residual " + sci(nystrom);
  return v;
}

// --- 5 ---------------------------------------------------------------------

Verdict limit_endpoints() {
  Verdict v;
  double imag = 0.0, modulus = 0.0;
  auto eval = [&](double c, double e, double xi) {
    const auto r = limit_formula(c, e, xi);
    imag = std::max(imag, std::abs(r.value.imag()));
    modulus = std::max(modulus, std::abs(r.value));
    return r.value.real();
  };

  double free_gap = 0.0;
  for (double xi : {0.5, 1.0, 1.5, 2.0}) free_gap = std::max(free_gap, std::abs(eval(1e-6, 0.0, xi) - sinc_pi(xi)));

  const double frozen = eval(100.0, 0.0, 1.0);
  const double frozen_gap = std::abs(frozen - 1.0);

  double origin = 0.0;
  for (double c : {1e-6, 0.1, 1.0, 10.0, 100.0, 1000.0})
    for (double e : {0.0, 0.5, 1.0, -1.5}) origin = std::max(origin, std::abs(eval(c, e, 0.0) - 1.0));

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> log_c(-6.0, 3.0), energy(-1.9, 1.9), xi_d(0.0, 4.0);
  for (int k = 0; k < 200; ++k) eval(std::pow(10.0, log_c(gen)), energy(gen), xi_d(gen));

  const bool free_ok = free_gap <= 1e-3;
  const bool frozen_ok = frozen_gap <= 0.05;
  const bool origin_ok = origin <= 1e-12;
  v.pass = free_ok && frozen_ok && origin_ok && imag <= 1e-10 && modulus <= 1.0 + 1e-12;
  v.detail = "sinc gap " + sci(free_gap) + ", |limit(100,0,1) - 1| = " + sci(frozen_gap) +
             (frozen_ok ? "" : " (> 0.05)") + ", xi=0 gap " + sci(origin) + ", max imag " + sci(imag) +
             ", max modulus " + sci(modulus);
  return v;
}

// --- 6 ---------------------------------------------------------------------

Verdict expm_oracle() {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> log_c(-2.0, 1.0), xi_d(-3.0, 3.0), energy(-1.5, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = build_generator(std::pow(10.0, log_c(gen)), energy(gen), xi_d(gen), 32);
    const Eigen::MatrixXcd dense = g.dense();
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(g.dim());
    v[0] = 1.0;
    const Eigen::VectorXcd fast = expm_apply(g, v);

    // RK4 on v' = -G v, step size resolving the largest diagonal entry.
    const double scale = dense.cwiseAbs().rowwise().sum().maxCoeff();
    const int steps = std::max(2000, static_cast<int>(std::ceil(scale * 40.0)));
    const double h = 1.0 / steps;
    for (int s = 0; s < steps; ++s) {
      const Eigen::VectorXcd k1 = -dense * v;
      const Eigen::VectorXcd k2 = -dense * (v + 0.5 * h * k1);
      const Eigen::VectorXcd k3 = -dense * (v + 0.5 * h * k2);
      const Eigen::VectorXcd k4 = -dense * (v + h * k3);
      v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    worst = std::max(worst, (fast - v).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-8, "max |expm - RK4| " + sci(worst) + " over 20 generators"};
}

// --- 7-10 ------------------------------------------------------------------

ExperimentConfig mc_config(std::size_t n, double w, std::vector<double> xi, std::size_t samples,
                           std::uint64_t seed) {
  ExperimentConfig c;
  c.mode = Mode::mc_f2;
  c.n = n;
  c.w = w;
  c.e = 0.0;
  c.xi = std::move(xi);
  c.samples = samples;
  c.seed = seed;
  c.streams = 16;
  return c;
}

ExperimentConfig delocalized_config() { return mc_config(16, 64.0, {0.5, 1.0}, 200000, 7); }

ExperimentConfig critical_config() {
  ExperimentConfig c;
  c.mode = Mode::compare;
  c.c_star = 1.0;
  c.w = 12.0;
  c.e = 0.0;
  c.xi = {0.5, 1.0, 1.5};
  c.samples = 100000;
  c.seed = 9;
  c.streams = 16;
  return c;
}

Verdict gate_rows(const std::string& csv, const std::function<double(double)>& target, double floor,
                  int value_col, int stderr_col) {
  Verdict v;
  for (const auto& row : parse_csv(csv)) {
    const double xi = row.cells[0];
    const double value = row.cells[value_col];
    const double se = row.cells[stderr_col];
    const double gap = std::abs(value - target(xi));
    const double budget = std::max(3.0 * se, floor);
    if (!(gap <= budget)) v.pass = false;
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += "xi=" + sci(xi) + ": mc " + sci(value) + " +- " + sci(se) + ", target " + sci(target(xi)) +
                ", gap " + sci(gap) + " / budget " + sci(budget);
  }
  return v;
}

Verdict delocalized() {
  const auto r = run(delocalized_config());
  return gate_rows(r.artifacts[0].bytes, sinc_pi, 0.1, 1, 2);
}

Verdict localized() {
  const auto r = run(mc_config(400, 4.0, {1.0}, 200000, 8));
  return gate_rows(r.artifacts[0].bytes, [](double) { return 1.0; }, 0.15, 1, 2);
}

Verdict critical() {
  const auto r = run(critical_config());
  return gate_rows(r.artifacts[0].bytes, [](double xi) { return limit_formula(1.0, 0.0, xi).value.real(); },
                   0.15, 1, 2);
}

Verdict determinism() {
  Verdict v;
  for (auto make : {delocalized_config, critical_config}) {
    ExperimentConfig one = make(), many = make();
    one.threads = 1;
    many.threads = 4;
    const auto a = run(one);
    const auto b = run(many);
    const bool same = a.artifacts[0].bytes == b.artifacts[0].bytes;
    v.pass = v.pass && same;
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += std::string(mode_name(one.mode)) + " threads 1 vs 4: " + (same ? "identical" : "DIFFERENT") +
                " (sha256 " + sha256_hex(a.artifacts[0].bytes).substr(0, 12) + ")";
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "run only these criteria (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"covariance identities", covariance_identities},
      {"sampler law", sampler_law},
      {"saddle normalization", saddle_normalization},
      {"K* spectrum", kstar_spectrum},
      {"limit formula endpoints", limit_endpoints},
      {"expm vs ODE oracle", expm_oracle},
      {"delocalized-regime Monte Carlo", delocalized},
      {"localized-regime Monte Carlo", localized},
      {"critical-regime comparison", critical},
      {"determinism across thread counts", determinism},
  };

  const std::set<int> selected(only.begin(), only.end());
  bool all_pass = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& ex) {
      v = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_pass = all_pass && v.pass;
    std::printf("%s  criterion %d  %s  [%s] (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
