#include "rbm/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <openssl/evp.h>

#include "rbm/charpoly.hpp"
#include "rbm/covariance.hpp"
#include "rbm/crossover.hpp"
#include "rbm/csv.hpp"
#include "rbm/ensemble.hpp"
#include "rbm/errors.hpp"
#include "rbm/power_iteration.hpp"
#include "rbm/saddle.hpp"
#include "rbm/sphere.hpp"
#include "rbm/transfer.hpp"

#ifndef RBM_VERSION
#define RBM_VERSION "0.1.0"
#endif

namespace rbm {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 8> kModes{{
    {Mode::covariance, "covariance"},
    {Mode::sample, "sample"},
    {Mode::mc_f2, "mc-f2"},
    {Mode::limit, "limit"},
    {Mode::kstar_spectrum, "kstar-spectrum"},
    {Mode::crossover_scan, "crossover-scan"},
    {Mode::compare, "compare"},
    {Mode::diagnostics, "diagnostics"},
}};

}  // namespace

std::string_view mode_name(Mode mode) {
  for (const auto& [m, name] : kModes) {
    if (m == mode) return name;
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  for (const auto& [m, n] : kModes) {
    if (n == name) return m;
  }
  throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

json ExperimentConfig::to_json() const {
  return json{{"mode", mode_name(mode)},
              {"n", n},
              {"w", w},
              {"e", e},
              {"xi", xi},
              {"samples", samples},
              {"count", count},
              {"c_star", c_star},
              {"c_star_min", c_star_min},
              {"c_star_max", c_star_max},
              {"points", points},
              {"t", t},
              {"j_max", j_max},
              {"quad_order", quad_order},
              {"order", order},
              {"seed", seed},
              {"streams", streams},
              {"threads", threads},
              {"out", out}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "mode") c.mode = parse_mode(value.get<std::string>());
      else if (key == "n") c.n = value.get<std::size_t>();
      else if (key == "w") c.w = value.get<double>();
      else if (key == "e") c.e = value.get<double>();
      else if (key == "xi") c.xi = value.is_array() ? value.get<std::vector<double>>()
                                                    : std::vector<double>{value.get<double>()};
      else if (key == "samples") c.samples = value.get<std::size_t>();
      else if (key == "count") c.count = value.get<std::size_t>();
      else if (key == "c_star") c.c_star = value.get<double>();
      else if (key == "c_star_min") c.c_star_min = value.get<double>();
      else if (key == "c_star_max") c.c_star_max = value.get<double>();
      else if (key == "points") c.points = value.get<std::size_t>();
      else if (key == "t") c.t = value.get<double>();
      else if (key == "j_max") c.j_max = value.get<int>();
      else if (key == "quad_order") c.quad_order = value.get<int>();
      else if (key == "order") c.order = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "streams") c.streams = value.get<std::size_t>();
      else if (key == "threads") c.threads = value.get<std::size_t>();
      else if (key == "out") c.out = value.get<std::string>();
      else throw InvalidArgument("unknown config key '" + key + "'");
    }
  } catch (const json::exception& ex) {
    throw InvalidArgument(std::string("malformed config: ") + ex.what());
  }
  return c;
}

json RunRecord::to_json() const {
  json sums = json::object();
  for (const auto& [suffix, digest] : checksums) sums[suffix] = digest;
  return json{{"config", config},
              {"version", version},
              {"wall_seconds", wall_seconds},
              {"checksums", sums},
              {"warnings", warnings}};
}

std::string tool_version() { return RBM_VERSION; }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

namespace {

RngStreamPolicy policy_of(const ExperimentConfig& c) {
  if (c.streams < 1) throw InvalidArgument("streams must be >= 1");
  return {c.seed, c.streams};
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

void run_covariance(const ExperimentConfig& c, RunResult& r) {
  const CovarianceProfile profile = build_covariance({c.n, c.w, std::nullopt});
  std::string csv;
  const auto& j = profile.entries();
  for (Eigen::Index row = 0; row < j.rows(); ++row) {
    for (Eigen::Index col = 0; col < j.cols(); ++col) {
      if (col > 0) csv += ',';
      csv += format_double(j(row, col));
    }
    csv += '\n';
  }
  json decay = json::array();
  for (const auto& [k, v] : decay_profile(profile)) decay.push_back(json::array({k, v}));
  const json sidecar{{"n", c.n},
                     {"w", c.w},
                     {"row_sum_max_err", profile.row_sum_error()},
                     {"identity_residual", profile.identity_residual()},
                     {"decay_profile", decay}};
  r.artifacts.push_back({".csv", std::move(csv)});
  r.artifacts.push_back({".json", sidecar.dump(2) + "\n"});
}

void run_sample(const ExperimentConfig& c, RunResult& r) {
  const CovarianceProfile profile = build_covariance({c.n, c.w, std::nullopt});
  const SeedRecord seed_record = policy_of(c).stream(0);
  const auto samples = sample_many(profile, seed_record, c.count);
  std::ostringstream bin(std::ios::binary);
  write_samples(bin, samples);
  const json manifest{{"format", "RBM1"},
                      {"layout", "little-endian; magic, n u32, count u32, count x n^2 (re, im) f64 row-major"},
                      {"n", c.n},
                      {"w", c.w},
                      {"count", c.count},
                      {"seed", seed_record.seed},
                      {"stream", seed_record.stream}};
  r.artifacts.push_back({".bin", bin.str()});
  r.artifacts.push_back({".json", manifest.dump(2) + "\n"});
}

void run_mc_f2(const ExperimentConfig& c, RunResult& r) {
  const CovarianceProfile profile = build_covariance({c.n, c.w, std::nullopt});
  const EnergyWindow window = EnergyWindow::make(c.e, c.xi, c.n);
  const FbarRun mc = estimate_fbar(profile, window, c.samples, policy_of(c), c.threads);
  CsvBuilder csv("xi,value,stderr,n_samples,ess_ratio");
  for (const auto& est : mc.estimates) {
    csv.row({format_double(est.xi), format_double(est.value), format_double(est.std_error),
             std::to_string(est.n_samples), format_double(est.ess_ratio)});
  }
  r.artifacts.push_back({".csv", csv.str()});
  r.record.warnings.insert(r.record.warnings.end(), mc.warnings.begin(), mc.warnings.end());
}

void run_limit(const ExperimentConfig& c, RunResult& r) {
  CsvBuilder csv("xi,value,imag_residual,L_used");
  for (double xi : c.xi) {
    const LimitValue v = limit_formula(c.c_star, c.e, xi, c.order);
    if (v.warning) r.record.warnings.push_back(*v.warning);
    csv.row({format_double(xi), format_double(v.value.real()), format_double(std::abs(v.value.imag())),
             std::to_string(v.order_used)});
  }
  r.artifacts.push_back({".csv", csv.str()});
}

void run_kstar(const ExperimentConfig& c, RunResult& r) {
  const int quad = c.quad_order > 0 ? c.quad_order : std::max(64, 4 * c.j_max);
  const FunkHeckeSpectrum spec = funk_hecke_eigs(c.t, c.w, c.j_max, quad);
  if (spec.warning) r.record.warnings.push_back(*spec.warning);
  CsvBuilder csv("j,lambda_quadrature,lambda_asymptotic,rel_dev");
  for (int j = 0; j <= c.j_max; ++j) {
    const double q = spec.lambda(j);
    const double a = kstar_asymptotic_eigenvalue(c.t, c.w, j);
    csv.row({std::to_string(j), format_double(q), format_double(a),
             format_double(std::abs(q - a) / std::abs(a))});
  }
  r.artifacts.push_back({".csv", csv.str()});
}

void run_scan(const ExperimentConfig& c, RunResult& r) {
  if (!(c.c_star_min > 0.0) || !(c.c_star_max >= c.c_star_min) || c.points < 1) {
    throw InvalidArgument("crossover scan needs 0 < c_star_min <= c_star_max and points >= 1");
  }
  CsvBuilder csv("xi,c_star,value,imag_residual,L_used");
  const double lo = std::log(c.c_star_min);
  const double hi = std::log(c.c_star_max);
  for (double xi : c.xi) {
    for (std::size_t p = 0; p < c.points; ++p) {
      const double frac = c.points == 1 ? 0.0 : static_cast<double>(p) / static_cast<double>(c.points - 1);
      const double cs = std::exp(lo + frac * (hi - lo));
      const LimitValue v = limit_formula(cs, c.e, xi, c.order);
      if (v.warning) r.record.warnings.push_back(*v.warning);
      csv.row({format_double(xi), format_double(cs), format_double(v.value.real()),
               format_double(std::abs(v.value.imag())), std::to_string(v.order_used)});
    }
  }
  r.artifacts.push_back({".csv", csv.str()});
}

void run_compare(const ExperimentConfig& c, RunResult& r) {
  const EnergyWindow window = critical_window(c.c_star, c.w, c.e, c.xi);
  const CrossoverTable table =
      crossover_experiment(c.c_star, c.w, window, c.samples, policy_of(c), c.threads);
  CsvBuilder csv("xi,mc_value,mc_stderr,limit_value,abs_gap");
  for (const auto& row : table.rows) {
    csv.row({format_double(row.xi), format_double(row.mc_value), format_double(row.mc_stderr),
             format_double(row.limit_value), format_double(std::abs(row.mc_value - row.limit_value))});
  }
  r.artifacts.push_back({".csv", csv.str()});
  r.record.warnings.insert(r.record.warnings.end(), table.warnings.begin(), table.warnings.end());
}

void run_diagnostics(const ExperimentConfig& c, RunResult& r) {
  const SaddleData s = SaddleData::at(c.e);
  json report;
  report["saddle"] = {{"e", s.e},
                      {"rho", s.rho},
                      {"a_plus", s.a_plus},
                      {"a_minus", s.a_minus},
                      {"t_star", s.t_star},
                      {"c_plus", complex_json(s.c_plus)},
                      {"c_minus", complex_json(s.c_minus)},
                      {"C_plus", complex_json(s.big_c_plus)},
                      {"crossover_constant_per_c_star", s.crossover_constant(1.0)}};
  report["g"] = {{"g_a_plus", complex_json(g_of(s.a_plus, c.e))},
                 {"g_a_minus", complex_json(g_of(s.a_minus, c.e))}};

  Engine engine = SeedRecord{c.seed, 0}.engine();
  double surface_residual = 0.0;
  int cut_hits = 0;
  constexpr int kSurfaceProbes = 100;
  for (int k = 0; k < kSurfaceProbes; ++k) {
    const Eigen::Matrix2cd x = s.x_surface(haar_coset_unitary(engine));
    surface_residual = std::max(surface_residual, std::abs(std::abs(curly_f(x, c.e)) - 1.0));
    if (on_log_branch_cut(x, c.e)) ++cut_hits;
  }
  report["curly_f_residuals"] = {
      {"x_plus", std::abs(std::abs(curly_f(s.x_plus(), c.e)) - 1.0)},
      {"x_minus", std::abs(std::abs(curly_f(s.x_minus(), c.e)) - 1.0)},
      {"surface_max", surface_residual},
      {"surface_probes", kSurfaceProbes},
      {"branch_cut_hits", cut_hits}};
  if (cut_hits > 0) {
    r.record.warnings.push_back("log det evaluated on the negative real axis at " +
                                std::to_string(cut_hits) +
                                " saddle-surface probes (principal branch used; |F| unaffected)");
  }

  constexpr double kHalfWidth = 3.0;
  const int nodes = std::max(400, static_cast<int>(std::ceil(8.0 * kHalfWidth * c.w)) + 1);
  const AKernelMatrix a = a_kernel_nystrom(c.e, c.w, kHalfWidth, nodes);
  const EigenEstimate lead = leading_eigenvalue(a.matrix);
  const AKernelMatrix fine = a_kernel_nystrom(c.e, c.w, kHalfWidth, 2 * nodes - 1);
  const EigenEstimate lead_fine = leading_eigenvalue(fine.matrix);
  report["a_kernel"] = {{"nodes", nodes},
                        {"half_width", kHalfWidth},
                        {"spacing", a.spacing},
                        {"lambda0", complex_json(lead.value)},
                        {"modulus", std::abs(lead.value)},
                        {"modulus_refined_grid", std::abs(lead_fine.value)},
                        {"power_iterations", lead.power_iterations},
                        {"refinement_iterations", lead.refinement_iterations},
                        {"residual", lead.residual},
                        {"converged", lead.converged}};
  r.artifacts.push_back({".json", report.dump(2) + "\n"});
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.record.config = config.to_json();
  result.record.version = tool_version();
  switch (config.mode) {
    case Mode::covariance: run_covariance(config, result); break;
    case Mode::sample: run_sample(config, result); break;
    case Mode::mc_f2: run_mc_f2(config, result); break;
    case Mode::limit: run_limit(config, result); break;
    case Mode::kstar_spectrum: run_kstar(config, result); break;
    case Mode::crossover_scan: run_scan(config, result); break;
    case Mode::compare: run_compare(config, result); break;
    case Mode::diagnostics: run_diagnostics(config, result); break;
  }
  for (const auto& a : result.artifacts) result.record.checksums.emplace_back(a.suffix, sha256_hex(a.bytes));
  result.record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_outputs(const RunResult& result, const std::filesystem::path& prefix) {
  if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
  auto write = [](const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  };
  for (const auto& a : result.artifacts) write(prefix.string() + a.suffix, a.bytes);
  write(prefix.string() + ".run.json", result.record.to_json().dump(2) + "\n");
}

}  // namespace rbm
