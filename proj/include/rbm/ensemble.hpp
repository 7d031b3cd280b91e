#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rbm/covariance.hpp"

namespace rbm {

using Engine = std::mt19937_64;

/// Identifies one reproducible random substream.
struct SeedRecord {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  Engine engine() const;
  bool operator==(const SeedRecord&) const = default;
};

/// Splits a master seed into `stream_count` independent substreams. Results of
/// a parallel run depend only on (master_seed, stream_count).
struct RngStreamPolicy {
  std::uint64_t master_seed = 0;
  std::size_t stream_count = 1;

  SeedRecord stream(std::size_t index) const { return {master_seed, index}; }
  /// Number of samples owned by stream `index` when `total` are split evenly.
  std::size_t share(std::size_t index, std::size_t total) const;
};

struct RbmSample {
  Eigen::MatrixXcd h;
  SeedRecord seed_record;
};

/// Draws Hermitian matrices with E|H_ij|^2 = J_ij, E H_ij^2 = 0 (i != j) and
/// real diagonal of variance J_ii. Holds the precomputed entry scales.
class RbmSampler {
 public:
  explicit RbmSampler(const CovarianceProfile& profile);

  std::size_t n() const { return static_cast<std::size_t>(offdiag_scale_.rows()); }

  /// Fills `h` (resized to n x n) from `engine`. Upper triangle is drawn row
  /// by row (diagonal, then real/imaginary pairs); the lower triangle is its
  /// conjugate.
  void draw(Engine& engine, Eigen::MatrixXcd& h) const;

 private:
  Eigen::MatrixXd offdiag_scale_;  // sqrt(J_ij / 2)
  Eigen::VectorXd diag_scale_;     // sqrt(J_ii)
};

/// One draw from a freshly seeded substream.
RbmSample sample_rbm(const CovarianceProfile& profile, SeedRecord seed_record);

/// `count` consecutive draws from one substream.
std::vector<RbmSample> sample_many(const CovarianceProfile& profile, SeedRecord seed_record,
                                   std::size_t count);

/// Entrywise sample moments of a set of draws.
struct CovarianceMoments {
  std::size_t count = 0;
  Eigen::MatrixXd mean_abs_square;      // mean |H_ij|^2
  Eigen::MatrixXcd mean_square;         // mean H_ij^2
  Eigen::MatrixXd abs_square_stderr;    // standard error of mean |H_ij|^2
  Eigen::MatrixXcd square_stderr;       // standard errors of Re and Im of mean H_ij^2
};

/// Throws InvalidArgument for fewer than two samples or mixed sizes.
CovarianceMoments empirical_covariance(std::span<const RbmSample> samples);

/// Little-endian "RBM1" container: magic, n (u32), count (u32), then count
/// row-major blocks of n^2 interleaved (re, im) f64 values.
void write_samples(std::ostream& out, std::span<const RbmSample> samples);
void write_samples(const std::filesystem::path& path, std::span<const RbmSample> samples);
std::vector<Eigen::MatrixXcd> read_samples(const std::filesystem::path& path);

}  // namespace rbm
