#include "rbm/charpoly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "rbm/errors.hpp"

namespace rbm {

double semicircle_rho(double e) {
  if (!(std::abs(e) <= 2.0)) {
    throw DomainError("semicircle density is supported on [-2, 2]");
  }
  return std::sqrt(4.0 - e * e) / (2.0 * std::numbers::pi);
}

EnergyWindow EnergyWindow::make(double e, std::vector<double> xi_grid, std::size_t n) {
  if (!(std::abs(e) < 2.0)) throw DomainError("spectral centre must lie in (-2, 2)");
  if (n < 1) throw InvalidArgument("window needs n >= 1");
  std::sort(xi_grid.begin(), xi_grid.end());
  EnergyWindow window{e, semicircle_rho(e), std::move(xi_grid), n};
  for (double xi : window.xi_grid) {
    if (!std::isfinite(xi)) throw InvalidArgument("xi grid contains a non-finite value");
    const auto [x1, x2] = window.points(xi);
    if (!(std::abs(x1) < 2.0 && std::abs(x2) < 2.0)) {
      throw DomainError("evaluation points for xi = " + std::to_string(xi) +
                        " leave the bulk (-2, 2)");
    }
  }
  return window;
}

std::pair<double, double> EnergyWindow::points(double xi) const {
  const double shift = xi / (2.0 * static_cast<double>(n) * rho);
  return {e + shift, e - shift};
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success || !solver.eigenvalues().allFinite()) {
    throw NumericalError("Hermitian eigenvalue solver failed");
  }
  return solver.eigenvalues();
}

LogProduct charpoly_log_pair(std::span<const double> eigenvalues, double x1, double x2) {
  LogProduct out{0.0, 1};
  for (double lambda : eigenvalues) {
    const double d1 = x1 - lambda;
    const double d2 = x2 - lambda;
    if (d1 == 0.0 || d2 == 0.0) {
      return {-std::numeric_limits<double>::infinity(), 0};
    }
    out.log_magnitude += std::log(std::abs(d1)) + std::log(std::abs(d2));
    if ((d1 < 0.0) != (d2 < 0.0)) out.sign = -out.sign;
  }
  return out;
}

LogProduct charpoly_log_pair(const Eigen::MatrixXcd& h, double x1, double x2) {
  const Eigen::VectorXd eig = hermitian_eigenvalues(h);
  return charpoly_log_pair(std::span<const double>(eig.data(), eig.size()), x1, x2);
}

// --- LogProductAccumulator -------------------------------------------------

void LogProductAccumulator::rescale_to(double new_offset) {
  if (!(new_offset > offset_)) return;
  const double f = std::exp(offset_ - new_offset);
  sum_ *= f;
  abs_sum_ *= f;
  sum_sq_ *= f * f;
  offset_ = new_offset;
}

void LogProductAccumulator::add(double log_magnitude, int sign) {
  ++count_;
  if (sign == 0) return;
  rescale_to(log_magnitude);
  const double v = std::exp(log_magnitude - offset_);
  sum_ += sign > 0 ? v : -v;
  abs_sum_ += v;
  sum_sq_ += v * v;
}

void LogProductAccumulator::merge(const LogProductAccumulator& other) {
  LogProductAccumulator rhs = other;
  const double target = std::max(offset_, rhs.offset_);
  rescale_to(target);
  rhs.rescale_to(target);
  sum_ += rhs.sum_;
  abs_sum_ += rhs.abs_sum_;
  sum_sq_ += rhs.sum_sq_;
  count_ += rhs.count_;
}

double LogProductAccumulator::mean() const {
  if (count_ == 0 || sum_ == 0.0) return 0.0;
  return sum_ / static_cast<double>(count_) * std::exp(offset_);
}

double LogProductAccumulator::log_abs_mean() const {
  return std::log(std::abs(sum_) / static_cast<double>(count_)) + offset_;
}

double LogProductAccumulator::variance() const {
  if (count_ < 2) return 0.0;
  const double m = static_cast<double>(count_);
  const double mean_scaled = sum_ / m;
  const double var_scaled = std::max(0.0, (sum_sq_ - m * mean_scaled * mean_scaled) / (m - 1.0));
  return var_scaled == 0.0 ? 0.0 : var_scaled * std::exp(2.0 * offset_);
}

double LogProductAccumulator::ess_ratio() const {
  if (count_ == 0 || sum_sq_ == 0.0) return 0.0;
  return abs_sum_ * abs_sum_ / (static_cast<double>(count_) * sum_sq_);
}

// --- PairAccumulator -------------------------------------------------------

namespace {

double offset_factor(double old_offset, double new_offset) {
  return new_offset > old_offset ? std::exp(old_offset - new_offset) : 1.0;
}

}  // namespace

void PairAccumulator::add(LogProduct numerator, LogProduct denominator) {
  const double na = numerator.sign ? std::max(num_.offset(), numerator.log_magnitude) : num_.offset();
  const double nb =
      denominator.sign ? std::max(den_.offset(), denominator.log_magnitude) : den_.offset();
  if (cross_ != 0.0) cross_ *= offset_factor(num_.offset(), na) * offset_factor(den_.offset(), nb);
  num_.rescale_to(na);
  den_.rescale_to(nb);
  num_.add(numerator);
  den_.add(denominator);
  if (numerator.sign != 0 && denominator.sign != 0) {
    const double v = std::exp(numerator.log_magnitude - na) * std::exp(denominator.log_magnitude - nb);
    cross_ += (numerator.sign == denominator.sign) ? v : -v;
  }
}

void PairAccumulator::merge(const PairAccumulator& other) {
  const double na = std::max(num_.offset(), other.num_.offset());
  const double nb = std::max(den_.offset(), other.den_.offset());
  double lhs = cross_;
  if (lhs != 0.0) lhs *= offset_factor(num_.offset(), na) * offset_factor(den_.offset(), nb);
  double rhs = other.cross_;
  if (rhs != 0.0) {
    rhs *= offset_factor(other.num_.offset(), na) * offset_factor(other.den_.offset(), nb);
  }
  cross_ = lhs + rhs;
  num_.merge(other.num_);
  den_.merge(other.den_);
}

RatioEstimate PairAccumulator::ratio() const {
  const std::size_t count = num_.count();
  if (count == 0 || den_.scaled_sum() == 0.0) {
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
  const double m = static_cast<double>(count);
  const double a = num_.scaled_sum() / m;
  const double b = den_.scaled_sum() / m;
  const double r = a / b;
  const double scale = std::exp(num_.offset() - den_.offset());
  RatioEstimate out{r * scale, 0.0};
  if (count < 2) return out;
  const double var_a = (num_.scaled_sum_squares() - m * a * a) / (m - 1.0);
  const double var_b = (den_.scaled_sum_squares() - m * b * b) / (m - 1.0);
  const double cov = (cross_ - m * a * b) / (m - 1.0);
  const double var_r = (var_a - 2.0 * r * cov + r * r * var_b) / (m * b * b);
  out.std_error = std::sqrt(std::max(0.0, var_r)) * scale;
  return out;
}

// --- estimator -------------------------------------------------------------

std::size_t default_thread_count() {
  if (const char* env = std::getenv("RBM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct StreamResult {
  std::vector<PairAccumulator> pairs;
  std::size_t dropped = 0;
};

StreamResult run_stream(const RbmSampler& sampler, const EnergyWindow& window,
                        SeedRecord seed_record, std::size_t count) {
  StreamResult out;
  out.pairs.resize(window.xi_grid.size());
  std::vector<std::pair<double, double>> points;
  for (double xi : window.xi_grid) points.push_back(window.points(xi));

  Engine engine = seed_record.engine();
  Eigen::MatrixXcd h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(static_cast<Eigen::Index>(sampler.n()));
  for (std::size_t s = 0; s < count; ++s) {
    sampler.draw(engine, h);
    solver.compute(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success || !solver.eigenvalues().allFinite()) {
      ++out.dropped;
      continue;
    }
    const auto& eig = solver.eigenvalues();
    const std::span<const double> spectrum(eig.data(), static_cast<std::size_t>(eig.size()));
    const LogProduct den = charpoly_log_pair(spectrum, window.e, window.e);
    for (std::size_t k = 0; k < points.size(); ++k) {
      out.pairs[k].add(charpoly_log_pair(spectrum, points[k].first, points[k].second), den);
    }
  }
  return out;
}

}  // namespace

FbarRun estimate_fbar(const CovarianceProfile& profile, const EnergyWindow& window,
                      std::size_t n_samples, const RngStreamPolicy& rng, std::size_t threads) {
  if (n_samples < 100) throw InvalidArgument("estimate_fbar needs at least 100 samples");
  if (window.n != profile.n()) {
    throw InvalidArgument("energy window n does not match the covariance profile");
  }
  if (rng.stream_count < 1) throw InvalidArgument("stream_count must be positive");

  const RbmSampler sampler(profile);
  const std::size_t streams = rng.stream_count;
  std::vector<StreamResult> results(streams);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t s = next++; s < streams; s = next++) {
      try {
        results[s] = run_stream(sampler, window, rng.stream(s), rng.share(s, n_samples));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(threads == 0 ? default_thread_count() : threads, streams);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  FbarRun run;
  std::vector<PairAccumulator> merged(window.xi_grid.size());
  for (const auto& r : results) {
    for (std::size_t k = 0; k < merged.size(); ++k) merged[k].merge(r.pairs[k]);
    run.dropped += r.dropped;
  }
  const std::size_t kept = n_samples - run.dropped;
  if (kept == 0) throw InsufficientData("every sample was discarded by the eigenvalue solver");
  if (run.dropped > 0) {
    std::ostringstream msg;
    msg << "dropped " << run.dropped << " of " << n_samples
        << " samples after eigenvalue solver failures";
    if (static_cast<double>(run.dropped) > 1e-3 * static_cast<double>(n_samples)) {
      msg << " (exceeds 0.1%; estimate flagged)";
    }
    run.warnings.push_back(msg.str());
  }

  for (std::size_t k = 0; k < merged.size(); ++k) {
    const RatioEstimate r = merged[k].ratio();
    run.estimates.push_back({window.xi_grid[k], r.value, r.std_error, kept,
                             merged[k].numerator().ess_ratio(), rng});
  }
  return run;
}

}  // namespace rbm
