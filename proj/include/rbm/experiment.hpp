#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace rbm {

enum class Mode { covariance, sample, mc_f2, limit, kstar_spectrum, crossover_scan, compare, diagnostics };

std::string_view mode_name(Mode mode);
/// InvalidArgument for unknown names.
Mode parse_mode(std::string_view name);

/// Flat, fully determining description of one run. Serializes losslessly to
/// JSON; unknown keys are rejected.
struct ExperimentConfig {
  Mode mode = Mode::limit;
  std::size_t n = 64;
  double w = 8.0;
  double e = 0.0;
  std::vector<double> xi{1.0};
  std::size_t samples = 10000;
  std::size_t count = 1;
  double c_star = 1.0;
  double c_star_min = 1e-3;
  double c_star_max = 1e3;
  std::size_t points = 25;
  double t = 4.0;
  int j_max = 10;
  int quad_order = 0;  // 0 selects max(64, 4 j_max)
  int order = 16;      // starting Legendre order of limit evaluations
  std::uint64_t seed = 1;
  std::size_t streams = 16;
  std::size_t threads = 0;  // 0 selects RBM_THREADS or the hardware concurrency
  std::string out;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  bool operator==(const ExperimentConfig&) const = default;
};

/// One output file: written to `<prefix><suffix>`.
struct Artifact {
  std::string suffix;
  std::string bytes;
};

struct RunRecord {
  nlohmann::json config;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> checksums;  // suffix -> sha256
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

struct RunResult {
  RunRecord record;
  std::vector<Artifact> artifacts;  // the first one is the primary payload
};

std::string tool_version();
std::string sha256_hex(std::string_view bytes);

/// Dispatches to the owning module and collects payloads plus the run record.
/// Library errors propagate as rbm::Error.
RunResult run(const ExperimentConfig& config);

/// Writes every artifact and `<prefix>.run.json`.
void write_outputs(const RunResult& result, const std::filesystem::path& prefix);

}  // namespace rbm
