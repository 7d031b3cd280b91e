#include "rbm/crossover.hpp"

#include "rbm/errors.hpp"
#include "rbm/sphere.hpp"

namespace rbm {

EnergyWindow critical_window(double c_star, double w, double e, std::vector<double> xi_grid) {
  return EnergyWindow::make(e, std::move(xi_grid), LatticeSpec::critical(c_star, w).n);
}

CrossoverTable crossover_experiment(double c_star, double w, const EnergyWindow& window,
                                    std::size_t n_samples, const RngStreamPolicy& rng,
                                    std::size_t threads) {
  CrossoverTable table;
  table.lattice = LatticeSpec::critical(c_star, w);
  if (table.lattice.n < 8) throw InvalidArgument("crossover experiment needs n = c_star*W^2 >= 8");
  if (window.n != table.lattice.n) {
    throw InvalidArgument("energy window n does not equal round(c_star*W^2)");
  }

  const CovarianceProfile profile = build_covariance(table.lattice);
  table.mc = estimate_fbar(profile, window, n_samples, rng, threads);
  table.warnings = table.mc.warnings;
  for (const F2Estimate& est : table.mc.estimates) {
    const LimitValue limit = limit_formula(c_star, window.e, est.xi);
    if (limit.warning) table.warnings.push_back(*limit.warning);
    table.rows.push_back({est.xi, est.value, est.std_error, limit.value.real()});
  }
  return table;
}

}  // namespace rbm
