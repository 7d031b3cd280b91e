// Command-line front end: one subcommand per experiment mode.

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbm/errors.hpp"
#include "rbm/experiment.hpp"

namespace {

using rbm::ExperimentConfig;

struct Override {
  CLI::Option* option;
  std::function<void(ExperimentConfig&, const ExperimentConfig&)> apply;
};

class FlagBinder {
 public:
  explicit FlagBinder(ExperimentConfig& flags) : flags_(flags) {}

  template <typename T>
  CLI::Option* bind(CLI::App* app, const std::string& name, T ExperimentConfig::*field,
                    const std::string& description) {
    CLI::Option* opt = app->add_option(name, flags_.*field, description);
    overrides_.push_back({opt, [field](ExperimentConfig& dst, const ExperimentConfig& src) {
                            dst.*field = src.*field;
                          }});
    return opt;
  }

  void apply(ExperimentConfig& target) const {
    for (const auto& o : overrides_) {
      if (o.option->count() > 0) o.apply(target, flags_);
    }
  }

 private:
  ExperimentConfig& flags_;
  std::vector<Override> overrides_;
};

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump()
            << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random band matrix laboratory: characteristic-polynomial correlations, "
               "their crossover limit and transfer-kernel diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", rbm::tool_version());

  ExperimentConfig flags;
  FlagBinder binder(flags);
  std::string config_path;
  app.add_option("--config", config_path, "flat JSON config; command-line flags override it")
      ->check(CLI::ExistingFile);
  binder.bind(&app, "--seed", &ExperimentConfig::seed, "master RNG seed");
  binder.bind(&app, "--streams", &ExperimentConfig::streams,
              "number of independent RNG substreams (fixes the result)");
  binder.bind(&app, "--threads", &ExperimentConfig::threads,
              "worker threads (default: RBM_THREADS or hardware concurrency)");
  binder.bind(&app, "--out", &ExperimentConfig::out,
              "output prefix; writes <prefix>.csv/.json/.bin and <prefix>.run.json");

  auto* cov = app.add_subcommand("covariance", "band covariance profile J as CSV plus a JSON sidecar");
  binder.bind(cov, "--n", &ExperimentConfig::n, "lattice size")->required();
  binder.bind(cov, "--w", &ExperimentConfig::w, "bandwidth W")->required();

  auto* sample = app.add_subcommand("sample", "draw matrices into an RBM1 binary file");
  binder.bind(sample, "--n", &ExperimentConfig::n, "lattice size")->required();
  binder.bind(sample, "--w", &ExperimentConfig::w, "bandwidth W")->required();
  binder.bind(sample, "--count", &ExperimentConfig::count, "number of draws");

  auto* mc = app.add_subcommand("mc-f2", "Monte Carlo estimate of the normalized correlator");
  binder.bind(mc, "--n", &ExperimentConfig::n, "lattice size")->required();
  binder.bind(mc, "--w", &ExperimentConfig::w, "bandwidth W")->required();
  binder.bind(mc, "--e", &ExperimentConfig::e, "spectral centre");
  binder.bind(mc, "--xi", &ExperimentConfig::xi, "comma-separated xi values")->delimiter(',');
  binder.bind(mc, "--samples", &ExperimentConfig::samples, "number of draws");

  auto* limit = app.add_subcommand("limit", "crossover limit at fixed C_*");
  binder.bind(limit, "--cstar", &ExperimentConfig::c_star, "C_* in n = C_* W^2")->required();
  binder.bind(limit, "--e", &ExperimentConfig::e, "spectral centre");
  binder.bind(limit, "--xi-list", &ExperimentConfig::xi, "comma-separated xi values")->delimiter(',');
  binder.bind(limit, "--L", &ExperimentConfig::order, "starting Legendre truncation order");

  auto* kstar = app.add_subcommand("kstar-spectrum", "zonal transfer-kernel eigenvalues by quadrature");
  binder.bind(kstar, "--t", &ExperimentConfig::t, "saddle coordinate t")->required();
  binder.bind(kstar, "--w", &ExperimentConfig::w, "bandwidth W")->required();
  binder.bind(kstar, "--jmax", &ExperimentConfig::j_max, "largest degree j");
  binder.bind(kstar, "--quad-order", &ExperimentConfig::quad_order, "Gauss-Legendre order (0 = auto)");

  auto* scan = app.add_subcommand("crossover-scan", "limit value on a log-spaced C_* grid");
  binder.bind(scan, "--xi", &ExperimentConfig::xi, "comma-separated xi values")->delimiter(',');
  binder.bind(scan, "--e", &ExperimentConfig::e, "spectral centre");
  binder.bind(scan, "--cstar-min", &ExperimentConfig::c_star_min, "smallest C_*");
  binder.bind(scan, "--cstar-max", &ExperimentConfig::c_star_max, "largest C_*");
  binder.bind(scan, "--points", &ExperimentConfig::points, "grid points");
  binder.bind(scan, "--L", &ExperimentConfig::order, "starting Legendre truncation order");

  auto* compare = app.add_subcommand("compare", "Monte Carlo at n = C_* W^2 against the limit");
  binder.bind(compare, "--w", &ExperimentConfig::w, "bandwidth W")->required();
  binder.bind(compare, "--cstar", &ExperimentConfig::c_star, "C_* in n = C_* W^2")->required();
  binder.bind(compare, "--e", &ExperimentConfig::e, "spectral centre");
  binder.bind(compare, "--xi-list", &ExperimentConfig::xi, "comma-separated xi values")->delimiter(',');
  binder.bind(compare, "--samples", &ExperimentConfig::samples, "number of draws");

  auto* diag = app.add_subcommand("diagnostics", "saddle data, weight residuals and A-kernel spectrum");
  binder.bind(diag, "--e", &ExperimentConfig::e, "spectral centre");
  binder.bind(diag, "--w", &ExperimentConfig::w, "bandwidth W")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    ExperimentConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      config = ExperimentConfig::from_json(nlohmann::json::parse(in));
    }
    binder.apply(config);
    config.mode = rbm::parse_mode(app.get_subcommands().front()->get_name());

    const rbm::RunResult result = rbm::run(config);
    if (!config.out.empty()) {
      rbm::write_outputs(result, config.out);
    } else {
      std::cout << result.artifacts.front().bytes;
    }
    std::cerr << result.record.to_json().dump(2) << '\n';
    return 0;
  } catch (const rbm::InvalidArgument& e) {
    return fail(e.kind(), e.what(), 2);
  } catch (const rbm::DomainError& e) {
    return fail(e.kind(), e.what(), 2);
  } catch (const nlohmann::json::exception& e) {
    return fail("usage", e.what(), 2);
  } catch (const rbm::Error& e) {
    return fail(e.kind(), e.what(), 3);
  } catch (const std::exception& e) {
    return fail("numerical-error", e.what(), 3);
  }
}
