#include "rbm/ensemble.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "rbm/errors.hpp"

namespace rbm {

static_assert(std::endian::native == std::endian::little,
              "sample container I/O assumes a little-endian host");

Engine SeedRecord::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x52424d31u};
  return Engine(seq);
}

std::size_t RngStreamPolicy::share(std::size_t index, std::size_t total) const {
  const std::size_t base = total / stream_count;
  return base + (index < total % stream_count ? 1 : 0);
}

RbmSampler::RbmSampler(const CovarianceProfile& profile)
    : offdiag_scale_((profile.entries().array() / 2.0).sqrt()),
      diag_scale_(profile.entries().diagonal().array().sqrt()) {}

void RbmSampler::draw(Engine& engine, Eigen::MatrixXcd& h) const {
  const auto n = diag_scale_.size();
  h.resize(n, n);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = {diag_scale_(i) * normal(engine), 0.0};
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double re = normal(engine);
      const double im = normal(engine);
      const std::complex<double> z{offdiag_scale_(i, j) * re, offdiag_scale_(i, j) * im};
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
}

RbmSample sample_rbm(const CovarianceProfile& profile, SeedRecord seed_record) {
  RbmSampler sampler(profile);
  Engine engine = seed_record.engine();
  RbmSample out{{}, seed_record};
  sampler.draw(engine, out.h);
  return out;
}

std::vector<RbmSample> sample_many(const CovarianceProfile& profile, SeedRecord seed_record,
                                   std::size_t count) {
  RbmSampler sampler(profile);
  Engine engine = seed_record.engine();
  std::vector<RbmSample> out(count);
  for (auto& s : out) {
    s.seed_record = seed_record;
    sampler.draw(engine, s.h);
  }
  return out;
}

CovarianceMoments empirical_covariance(std::span<const RbmSample> samples) {
  if (samples.size() < 2) throw InvalidArgument("empirical covariance needs at least 2 samples");
  const auto n = samples.front().h.rows();
  for (const auto& s : samples) {
    if (s.h.rows() != n || s.h.cols() != n) {
      throw InvalidArgument("samples have inconsistent sizes");
    }
  }

  // Sums and sums of squares of |H|^2, Re H^2, Im H^2.
  Eigen::ArrayXXd s_abs = Eigen::ArrayXXd::Zero(n, n), q_abs = s_abs;
  Eigen::ArrayXXd s_re = s_abs, q_re = s_abs, s_im = s_abs, q_im = s_abs;
  for (const auto& s : samples) {
    const Eigen::ArrayXXd abs2 = s.h.array().abs2();
    const Eigen::ArrayXXcd sq = s.h.array().square();
    s_abs += abs2;
    q_abs += abs2.square();
    s_re += sq.real();
    q_re += sq.real().square();
    s_im += sq.imag();
    q_im += sq.imag().square();
  }

  const double m = static_cast<double>(samples.size());
  auto stderr_of = [m](const Eigen::ArrayXXd& sum, const Eigen::ArrayXXd& sumsq) {
    const Eigen::ArrayXXd mean = sum / m;
    const Eigen::ArrayXXd var = ((sumsq - m * mean.square()) / (m - 1.0)).max(0.0);
    return Eigen::ArrayXXd((var / m).sqrt());
  };

  CovarianceMoments out;
  out.count = samples.size();
  out.mean_abs_square = (s_abs / m).matrix();
  out.mean_square = Eigen::MatrixXcd(n, n);
  out.mean_square.real() = (s_re / m).matrix();
  out.mean_square.imag() = (s_im / m).matrix();
  out.abs_square_stderr = stderr_of(s_abs, q_abs).matrix();
  out.square_stderr = Eigen::MatrixXcd(n, n);
  out.square_stderr.real() = stderr_of(s_re, q_re).matrix();
  out.square_stderr.imag() = stderr_of(s_im, q_im).matrix();
  return out;
}

namespace {

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::ifstream& in) {
  std::array<char, sizeof(T)> bytes{};
  in.read(bytes.data(), bytes.size());
  if (!in) throw InvalidArgument("truncated sample file");
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_samples(const std::filesystem::path& path, std::span<const RbmSample> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  write_samples(out, samples);
}

void write_samples(std::ostream& out, std::span<const RbmSample> samples) {
  const auto n = samples.empty() ? 0 : static_cast<std::uint32_t>(samples.front().h.rows());
  out.write("RBM1", 4);
  put<std::uint32_t>(out, n);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(samples.size()));
  for (const auto& s : samples) {
    for (Eigen::Index i = 0; i < s.h.rows(); ++i) {
      for (Eigen::Index j = 0; j < s.h.cols(); ++j) {
        put<double>(out, s.h(i, j).real());
        put<double>(out, s.h(i, j).imag());
      }
    }
  }
}

std::vector<Eigen::MatrixXcd> read_samples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::memcmp(magic.data(), "RBM1", 4) != 0) {
    throw InvalidArgument(path.string() + " is not an RBM1 sample file");
  }
  const auto n = static_cast<Eigen::Index>(get<std::uint32_t>(in));
  const auto count = get<std::uint32_t>(in);
  std::vector<Eigen::MatrixXcd> out(count, Eigen::MatrixXcd(n, n));
  for (auto& h : out) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double re = get<double>(in);
        h(i, j) = {re, get<double>(in)};
      }
    }
  }
  return out;
}

}  // namespace rbm
