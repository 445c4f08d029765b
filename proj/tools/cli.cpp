#include "cli.hpp"

#include <hurst_sde/estimators.hpp>
#include <hurst_sde/fbm.hpp>
#include <hurst_sde/harness.hpp>
#include <hurst_sde/io.hpp>
#include <hurst_sde/models.hpp>
#include <hurst_sde/version.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <vector>

namespace hurst_sde::cli {

namespace {

namespace fs = std::filesystem;

// Thrown for flag combinations CLI11 cannot express; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenArgs {
  double hurst = 0.0;
  std::size_t n = 0;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string method = "circulant";
};

struct SimulateArgs {
  double hurst = 0.0;
  std::size_t n = 0;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  std::size_t k_n = 1;
  std::string schedule;
  bool allow_small_k_n = false;
  std::string model = "verhulst";
  std::string model_json;
  double lambda = 1.0;
  double sigma = 0.5;
  double xi = 1.0;
  std::string drift;
  std::string diffusion;
  std::string out;
  std::string sidecar;
  std::string driver_out;
};

struct EstimateArgs {
  std::string estimator;
  std::string input;
  std::string sidecar;
  std::string g;
  double level = 0.95;
  std::size_t k_n = 0;
  std::string out = "-";
};

struct McArgs {
  std::string config;
  std::string out_dir;
  std::size_t threads = 0;
};

void emit(const std::string& target, std::ostream& out, const std::string& text) {
  if (target == "-") {
    out << text;
  } else {
    io::write_text(target, text);
  }
}

int run_gen(const GenArgs& a, std::ostream& out) {
  const HurstIndex h(a.hurst);
  const SamplePath path = a.method == "cholesky"
                              ? fbm::generate_fbm_cholesky(h, a.n, a.horizon, a.seed)
                              : fbm::generate_fbm(h, a.n, a.horizon, a.seed);
  if (a.out == "-") {
    io::write_path_csv(out, path);
  } else {
    io::write_path_csv(fs::path(a.out), path);
  }
  return kExitOk;
}

models::ModelSpec build_model(const SimulateArgs& a) {
  if (!a.model_json.empty()) return io::model_from_json(io::read_text(a.model_json));
  if (a.model == "verhulst") return models::ModelSpec::verhulst(a.lambda, a.sigma, a.xi);
  if (a.drift.empty() || a.diffusion.empty()) {
    throw UsageError("generic model needs --drift and --diffusion");
  }
  return models::ModelSpec::generic(ScalarFunction::parse(a.drift), ScalarFunction::parse(a.diffusion),
                                    a.xi);
}

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  const HurstIndex h(a.hurst);
  const models::ModelSpec model = build_model(a);
  std::size_t k_n = a.k_n;
  if (a.schedule == "square") k_n = models::square_schedule(a.n);
  if (a.schedule == "log") k_n = models::log_schedule(a.n);

  std::optional<models::NestedObservations> obs;
  if (k_n == 1) {
    // Coarse observations only; the growth condition concerns nested grids.
    SamplePath driver = fbm::generate_fbm(h, a.n, a.horizon, a.seed);
    const SamplePath x = models::simulate(model, driver);
    obs.emplace(a.n, 1, a.horizon, std::vector<double>(x.values().begin(), x.values().end()));
    obs->set_driver(std::move(driver));
  } else {
    models::NestedOptions opts;
    opts.allow_small_k_n = a.allow_small_k_n;
    opts.keep_driver = !a.driver_out.empty();
    obs = models::sample_nested(model, h, a.n, k_n, a.horizon, a.seed, opts);
  }

  io::write_nested_csv(fs::path(a.out), *obs);
  io::Sidecar sidecar{a.n, k_n, a.horizon, a.seed, a.hurst, model};
  const fs::path sidecar_path =
      a.sidecar.empty() ? fs::path(a.out).replace_extension(".json") : fs::path(a.sidecar);
  io::write_text(sidecar_path, io::sidecar_to_json(sidecar));
  if (!a.driver_out.empty() && obs->driver()) io::write_path_csv(fs::path(a.driver_out), *obs->driver());
  out << "wrote " << a.out << " (" << obs->m_n() + 1 << " points) and " << sidecar_path.string() << "\n";
  return kExitOk;
}

int run_estimate(const EstimateArgs& a, std::ostream& out) {
  const io::ObservedSeries series = io::read_series_csv(fs::path(a.input));
  std::optional<io::Sidecar> sidecar;
  if (!a.sidecar.empty()) sidecar = io::read_sidecar(a.sidecar);
  const double horizon = sidecar ? sidecar->horizon : series.horizon;
  const std::size_t points = series.values.size() - 1;

  std::size_t k_n = a.k_n > 0 ? a.k_n : (sidecar ? sidecar->k_n : 1);
  if (points % k_n != 0) {
    throw DataError("input has " + std::to_string(points) + " intervals, not divisible by k_n = " +
                    std::to_string(k_n));
  }
  const models::NestedObservations obs(points / k_n, k_n, horizon, series.values);

  estimators::EstimationResult result;
  if (a.estimator == "h1") {
    ScalarFunction g;
    if (!a.g.empty()) {
      g = ScalarFunction::parse(a.g);
    } else if (sidecar && sidecar->model) {
      g = sidecar->model->diffusion();
    } else {
      throw UsageError("h1 needs --g or a sidecar describing the model");
    }
    result = estimators::estimate_h1(obs.coarse_path(), g, a.level);
  } else {
    if (k_n < 2) throw UsageError("h2 needs nested observations: pass --sidecar or --k-n");
    result = estimators::estimate_h2(obs, a.level);
  }
  emit(a.out, out, io::estimation_report_json(result));
  return kExitOk;
}

int run_mc(const McArgs& a, std::ostream& out) {
  harness::ExperimentConfig config = harness::config_from_json(io::read_text(a.config));
  if (!a.out_dir.empty()) config.out_dir = a.out_dir;
  harness::RunOptions opts;
  opts.threads = a.threads;
  const harness::ExperimentReport report = harness::run_experiment(config, opts);
  if (config.out_dir.empty()) {
    out << harness::report_to_json(report);
    return kExitOk;
  }
  for (const auto& er : report.estimators) {
    const auto& ag = er.aggregates;
    out << estimators::to_string(er.estimator) << ": mean " << ag.mean_h_hat << ", bias "
        << ag.mean_bias << ", rmse " << ag.rmse << ", coverage " << ag.coverage << ", failed "
        << ag.failed << "/" << ag.replications << "\n";
  }
  out << "report written to " << (config.out_dir / "report.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int cli_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate fBm-driven SDEs and estimate the Hurst index", "hurst-sde"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Sample a fractional Brownian motion path to CSV");
  gen_cmd->add_option("--hurst", gen.hurst, "Hurst index in (0, 1)")->required();
  gen_cmd->add_option("--n", gen.n, "Number of grid intervals")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--t", gen.horizon, "Horizon T")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output CSV, - for stdout")->capture_default_str();
  gen_cmd->add_option("--method", gen.method, "Generator")
      ->check(CLI::IsMember({"circulant", "cholesky"}))
      ->capture_default_str();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a model path to CSV with a JSON sidecar");
  sim_cmd->add_option("--hurst", sim.hurst, "Hurst index of the driver")->required();
  sim_cmd->add_option("--n", sim.n, "Coarse grid intervals")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--t", sim.horizon, "Horizon T")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Seed")->capture_default_str();
  auto* k_opt = sim_cmd->add_option("--k-n", sim.k_n, "Refinement factor (1 = coarse only)")
                    ->check(CLI::PositiveNumber)
                    ->capture_default_str();
  sim_cmd->add_option("--schedule", sim.schedule, "k_n schedule")
      ->check(CLI::IsMember({"square", "log"}))
      ->excludes(k_opt);
  sim_cmd->add_flag("--allow-small-k-n", sim.allow_small_k_n, "Accept k_n < ceil(n ln n)");
  sim_cmd->add_option("--model", sim.model, "Model kind")
      ->check(CLI::IsMember({"verhulst", "generic"}))
      ->capture_default_str();
  sim_cmd->add_option("--model-json", sim.model_json, "Model description file")->check(CLI::ExistingFile);
  sim_cmd->add_option("--lambda", sim.lambda, "Verhulst lambda")->capture_default_str();
  sim_cmd->add_option("--sigma", sim.sigma, "Verhulst sigma")->capture_default_str();
  sim_cmd->add_option("--xi", sim.xi, "Initial value")->capture_default_str();
  sim_cmd->add_option("--drift", sim.drift, "Generic drift spec, e.g. affine:0,-1");
  sim_cmd->add_option("--diffusion", sim.diffusion, "Generic diffusion spec, e.g. const:1");
  sim_cmd->add_option("--out", sim.out, "Output CSV (i,t,value)")->required();
  sim_cmd->add_option("--sidecar", sim.sidecar, "Sidecar JSON (default: output with .json)");
  sim_cmd->add_option("--driver-out", sim.driver_out, "Also write the fBm driver CSV");

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Estimate H from stored observations");
  est_cmd->add_option("--estimator", est.estimator, "h1 (known g) or h2 (nested grid)")
      ->required()
      ->check(CLI::IsMember({"h1", "h2"}));
  est_cmd->add_option("--input", est.input, "Observation CSV")->required()->check(CLI::ExistingFile);
  est_cmd->add_option("--sidecar", est.sidecar, "Sidecar JSON")->check(CLI::ExistingFile);
  est_cmd->add_option("--g", est.g, "Builtin diffusion spec for h1, e.g. linear:0.5");
  est_cmd->add_option("--level", est.level, "Confidence level")
      ->check(CLI::Range(0.0, 0.999999))
      ->capture_default_str();
  est_cmd->add_option("--k-n", est.k_n, "Refinement factor when no sidecar is given");
  est_cmd->add_option("--out", est.out, "Report JSON, - for stdout")->capture_default_str();

  McArgs mc;
  auto* mc_cmd = app.add_subcommand("mc", "Run a Monte Carlo experiment from a JSON config");
  mc_cmd->add_option("--config", mc.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  mc_cmd->add_option("--out-dir", mc.out_dir, "Override the config's out_dir");
  mc_cmd->add_option("--threads", mc.threads, "Worker threads (default HURST_SDE_THREADS)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    const auto used = app.get_subcommands();
    err << (used.empty() ? app.help() : used.front()->help());
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen, out);
    if (sim_cmd->parsed()) return run_simulate(sim, out);
    if (est_cmd->parsed()) return run_estimate(est, out);
    if (mc_cmd->parsed()) return run_mc(mc, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

int cli_dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace hurst_sde::cli
