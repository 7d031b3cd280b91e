#pragma once

#include <string>
#include <vector>

#include "rbm/charpoly.hpp"
#include "rbm/covariance.hpp"

namespace rbm {

struct CrossoverRow {
  double xi = 0.0;
  double mc_value = 0.0;
  double mc_stderr = 0.0;
  double limit_value = 0.0;
};

struct CrossoverTable {
  LatticeSpec lattice;
  std::vector<CrossoverRow> rows;
  FbarRun mc;
  std::vector<std::string> warnings;
};

/// Window at n = round(c_star W^2).
EnergyWindow critical_window(double c_star, double w, double e, std::vector<double> xi_grid);

/// Monte Carlo estimate at n = round(c_star W^2) joined with the limit
/// (exp(-C* Laplacian - i pi xi c) 1, 1) at the same (c_star, e, xi).
/// Requires n >= 8 and window.n == n.
CrossoverTable crossover_experiment(double c_star, double w, const EnergyWindow& window,
                                    std::size_t n_samples, const RngStreamPolicy& rng,
                                    std::size_t threads = 0);

}  // namespace rbm
