#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rbm/covariance.hpp"
#include "rbm/ensemble.hpp"

namespace rbm {

/// Semicircle density (2 pi)^{-1} sqrt(4 - e^2). DomainError for |e| > 2.
double semicircle_rho(double e);

/// Spectral centre e, density rho(e) and the grid of rescaled distances xi.
/// Each xi maps to the pair e +- xi / (2 n rho).
struct EnergyWindow {
  double e = 0.0;
  double rho = 0.0;
  std::vector<double> xi_grid;
  std::size_t n = 1;

  /// Sorts the grid and checks that every evaluation point lies in (-2, 2).
  static EnergyWindow make(double e, std::vector<double> xi_grid, std::size_t n);

  std::pair<double, double> points(double xi) const;
};

/// log|prod| and sign of a real product; sign 0 means the product vanished.
struct LogProduct {
  double log_magnitude = 0.0;
  int sign = 1;
};

/// Eigenvalues of a Hermitian matrix (ascending). Throws NumericalError when the
/// solver fails or returns non-finite values.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h);

/// det(x1 - H) det(x2 - H) from the spectrum of H.
LogProduct charpoly_log_pair(std::span<const double> eigenvalues, double x1, double x2);
LogProduct charpoly_log_pair(const Eigen::MatrixXcd& h, double x1, double x2);
inline LogProduct charpoly_log_pair(const RbmSample& sample, double x1, double x2) {
  return charpoly_log_pair(sample.h, x1, x2);
}

/// Running sums of sign * exp(log_magnitude - offset) where the offset tracks
/// the largest magnitude seen so far. Mean and variance are recoverable at
/// any time without overflow.
class LogProductAccumulator {
 public:
  void add(double log_magnitude, int sign);
  void add(LogProduct p) { add(p.log_magnitude, p.sign); }
  /// Associative merge; both operands are expressed at the larger offset.
  void merge(const LogProductAccumulator& other);
  void rescale_to(double new_offset);

  std::size_t count() const { return count_; }
  double offset() const { return offset_; }
  double scaled_sum() const { return sum_; }
  double scaled_abs_sum() const { return abs_sum_; }
  double scaled_sum_squares() const { return sum_sq_; }

  /// Sample mean in natural units; may overflow to +-inf for huge offsets.
  double mean() const;
  double log_abs_mean() const;
  /// Unbiased sample variance in natural units.
  double variance() const;
  /// (sum |v|)^2 / (N sum v^2); 1 for equal weights, ~1/N when one draw dominates.
  double ess_ratio() const;

 private:
  double offset_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double abs_sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t count_ = 0;
};

struct RatioEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Numerator/denominator accumulators fed from the same draws, plus their
/// scaled cross moment for the delta-method error of the ratio of means.
class PairAccumulator {
 public:
  void add(LogProduct numerator, LogProduct denominator);
  void merge(const PairAccumulator& other);

  const LogProductAccumulator& numerator() const { return num_; }
  const LogProductAccumulator& denominator() const { return den_; }
  std::size_t count() const { return num_.count(); }

  /// mean(num) / mean(den) with first-order (delta-method) standard error
  /// using the empirical covariance of the two means.
  RatioEstimate ratio() const;

 private:
  LogProductAccumulator num_;
  LogProductAccumulator den_;
  double cross_ = 0.0;  // sum a' b' at the current offsets
};

/// Estimate of the normalized correlator at one xi.
struct F2Estimate {
  double xi = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double ess_ratio = 0.0;
  RngStreamPolicy rng;
};

struct FbarRun {
  std::vector<F2Estimate> estimates;
  std::size_t dropped = 0;
  std::vector<std::string> warnings;
};

/// RBM_THREADS if set, otherwise the hardware concurrency.
std::size_t default_thread_count();

/// Ratio-of-means Monte Carlo estimate of F2(x1, x2) / F2(e, e) for every xi
/// of the window. Each draw is diagonalized once; samples are split over
/// `rng.stream_count` substreams and merged in stream order, so the result is
/// independent of `threads` (0 selects default_thread_count()).
FbarRun estimate_fbar(const CovarianceProfile& profile, const EnergyWindow& window,
                      std::size_t n_samples, const RngStreamPolicy& rng, std::size_t threads = 0);

}  // namespace rbm
