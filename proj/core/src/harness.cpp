#include <hurst_sde/fbm.hpp>
#include <hurst_sde/harness.hpp>
#include <hurst_sde/io.hpp>
#include <hurst_sde/rng.hpp>
#include <hurst_sde/stats.hpp>
#include <hurst_sde/version.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace hurst_sde::harness {

using estimators::Estimator;
using nlohmann::json;

namespace {

std::string_view choice_name(EstimatorChoice c) {
  switch (c) {
    case EstimatorChoice::h1: return "h1";
    case EstimatorChoice::h2: return "h2";
    case EstimatorChoice::both: return "both";
  }
  return "h1";
}

EstimatorChoice parse_choice(const std::string& s) {
  if (s == "h1") return EstimatorChoice::h1;
  if (s == "h2") return EstimatorChoice::h2;
  if (s == "both") return EstimatorChoice::both;
  throw ArgumentError("estimator must be h1, h2 or both, got '" + s + "'");
}

bool runs(EstimatorChoice c, Estimator e) {
  return c == EstimatorChoice::both || (e == Estimator::h1 ? c == EstimatorChoice::h1
                                                           : c == EstimatorChoice::h2);
}

void validate(const ExperimentConfig& c) {
  HurstIndex::for_estimation(c.hurst);
  if (c.replications < 1) throw ArgumentError("replications must be >= 1");
  if (c.n < 3) throw ArgumentError("n must be >= 3");
  if (!(c.horizon > 0.0)) throw ArgumentError("T must be positive");
  if (!(c.level >= 0.0 && c.level < 1.0)) throw ArgumentError("level must lie in [0, 1)");
  if (c.oversample < 1) throw ArgumentError("oversample must be >= 1");
}

struct ReplicationOutcome {
  ReplicationRecord h1;
  ReplicationRecord h2;
};

void fill(ReplicationRecord& rec, const estimators::EstimationResult& res) {
  rec.status = ReplicationStatus::ok;
  rec.h_hat = res.h_hat;
  rec.ci_low = res.ci.low;
  rec.ci_high = res.ci.high;
  rec.clamped = res.clamped;
}

ReplicationOutcome run_replication(const ExperimentConfig& c, std::size_t k_n, std::size_t r) {
  ReplicationOutcome out;
  const std::uint64_t seed = derive_stream_seed(c.seed, r);
  for (ReplicationRecord* rec : {&out.h1, &out.h2}) {
    rec->r = r;
    rec->seed = seed;
    rec->status = ReplicationStatus::failed;
  }
  try {
    Rng rng(seed);
    const HurstIndex h(c.hurst);
    if (c.estimator == EstimatorChoice::h1) {
      const SamplePath driver = fbm::generate_fbm(h, c.n * c.oversample, c.horizon, rng);
      const SamplePath x = models::simulate(c.model, driver).restrict_to(c.oversample);
      fill(out.h1, estimators::estimate_h1(x, c.model.diffusion(), c.level));
    } else {
      models::NestedOptions opts;
      opts.allow_small_k_n = true;
      const auto obs = models::sample_nested(c.model, h, c.n, k_n, c.horizon, rng, opts);
      fill(out.h2, estimators::estimate_h2(obs, c.level));
      if (c.estimator == EstimatorChoice::both) {
        fill(out.h1, estimators::estimate_h1(obs.coarse_path(), c.model.diffusion(), c.level));
      }
    }
  } catch (const std::exception& e) {
    for (ReplicationRecord* rec : {&out.h1, &out.h2}) {
      if (rec->status == ReplicationStatus::failed) rec->failure = e.what();
    }
  }
  return out;
}

json aggregates_json(const Aggregates& a) {
  return {{"replications", a.replications},
          {"succeeded", a.succeeded},
          {"failed", a.failed},
          {"clamped", a.clamped},
          {"mean_h_hat", a.mean_h_hat},
          {"mean_bias", a.mean_bias},
          {"rmse", a.rmse},
          {"coverage", a.coverage},
          {"standardized_error",
           {{"mean", a.std_error_mean},
            {"variance", a.std_error_variance},
            {"skewness", a.std_error_skewness},
            {"excess_kurtosis", a.std_error_excess_kurtosis},
            {"ks_normal", a.ks_normal}}}};
}

json config_json(const ExperimentConfig& c) {
  json j = {{"model", json::parse(io::model_to_json(c.model))},
            {"H", c.hurst},
            {"estimator", std::string(choice_name(c.estimator))},
            {"n", c.n},
            {"k_n", c.k_n ? json(*c.k_n) : json(nullptr)},
            {"k_n_override", c.k_n_override},
            {"T", c.horizon},
            {"replications", c.replications},
            {"seed", c.seed},
            {"level", c.level},
            {"out_dir", c.out_dir.string()},
            {"oversample", c.oversample}};
  return j;
}

}  // namespace

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid config JSON: ") + e.what());
  }
  try {
    ExperimentConfig c;
    if (j.contains("model")) c.model = io::model_from_json(j["model"].dump());
    c.hurst = j.at("H").get<double>();
    c.estimator = parse_choice(j.value("estimator", std::string("h1")));
    c.n = j.at("n").get<std::size_t>();
    if (j.contains("k_n") && !j["k_n"].is_null()) c.k_n = j["k_n"].get<std::size_t>();
    c.k_n_override = j.value("k_n_override", false);
    c.horizon = j.value("T", 1.0);
    c.replications = j.at("replications").get<std::size_t>();
    c.seed = j.value("seed", std::uint64_t{0});
    c.level = j.value("level", 0.95);
    c.out_dir = j.value("out_dir", std::string());
    c.oversample = j.value("oversample", std::size_t{1});
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw DataError(std::string("bad config: ") + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2) + "\n"; }

double clt_rate(Estimator e, std::size_t n, double horizon, std::size_t k_n) {
  const double root_n = std::sqrt(static_cast<double>(n));
  if (e == Estimator::h1) return 2.0 * root_n * std::log(static_cast<double>(n) / horizon);
  return 2.0 * root_n * std::log(static_cast<double>(k_n));
}

Aggregates aggregate(std::span<const ReplicationRecord> records, Estimator e, double hurst,
                     std::size_t n, double horizon, std::size_t k_n) {
  Aggregates a;
  a.replications = records.size();
  const double rate = clt_rate(e, n, horizon, k_n);
  const double sigma = std::sqrt(fbm::sigma_sq(HurstIndex(hurst)));
  std::vector<double> standardized;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t covered = 0;
  for (const ReplicationRecord& rec : records) {
    if (rec.status != ReplicationStatus::ok) {
      ++a.failed;
      continue;
    }
    ++a.succeeded;
    if (rec.clamped) ++a.clamped;
    const double err = rec.h_hat - hurst;
    sum += rec.h_hat;
    sum_sq += err * err;
    if (rec.ci_low <= hurst && hurst <= rec.ci_high) ++covered;
    standardized.push_back(rate * err / sigma);
  }
  if (a.succeeded == 0) return a;
  const double count = static_cast<double>(a.succeeded);
  a.mean_h_hat = sum / count;
  a.mean_bias = a.mean_h_hat - hurst;
  a.rmse = std::sqrt(sum_sq / count);
  a.coverage = static_cast<double>(covered) / count;
  const stats::Moments m = stats::moments(standardized);
  a.std_error_mean = m.mean;
  a.std_error_variance = m.variance;
  a.std_error_skewness = m.skewness;
  a.std_error_excess_kurtosis = m.excess_kurtosis;
  a.ks_normal = stats::ks_distance_normal(standardized);
  return a;
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("HURST_SDE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentReport run_experiment(const ExperimentConfig& config, RunOptions options) {
  validate(config);
  ExperimentReport report;
  report.config = config;
  report.library_version = kVersion;
  report.rng_stream_version = Rng::kStreamVersion;

  const bool want_h2 = runs(config.estimator, Estimator::h2);
  if (want_h2) {
    report.k_n_used = config.k_n.value_or(models::square_schedule(config.n));
    if (!config.k_n_override && report.k_n_used < models::min_k_n(config.n)) {
      throw ArgumentError("k_n = " + std::to_string(report.k_n_used) +
                          " violates k_n >= ceil(n ln n); set k_n_override to run anyway");
    }
  }

  const std::size_t reps = config.replications;
  std::vector<ReplicationOutcome> outcomes(reps);
  const std::size_t threads =
      std::min(reps, options.threads > 0 ? options.threads : default_thread_count());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < reps; i = next++) {
      outcomes[i] = run_replication(config, report.k_n_used, i + 1);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (Estimator e : {Estimator::h1, Estimator::h2}) {
    if (!runs(config.estimator, e)) continue;
    EstimatorReport er;
    er.estimator = e;
    er.records.reserve(reps);
    for (const auto& o : outcomes) er.records.push_back(e == Estimator::h1 ? o.h1 : o.h2);
    er.aggregates = aggregate(er.records, e, config.hurst, config.n, config.horizon, report.k_n_used);
    const double failed_fraction =
        static_cast<double>(er.aggregates.failed) / static_cast<double>(reps);
    if (failed_fraction > kMaxFailureFraction) {
      const auto bad = std::find_if(er.records.begin(), er.records.end(), [](const auto& r) {
        return r.status == ReplicationStatus::failed;
      });
      throw ExperimentError(std::to_string(er.aggregates.failed) + " of " + std::to_string(reps) +
                            " replications failed for " + std::string(estimators::to_string(e)) +
                            "; first failure: " + bad->failure);
    }
    report.estimators.push_back(std::move(er));
  }

  if (options.write_files && !config.out_dir.empty()) write_report(report, config.out_dir);
  return report;
}

std::string report_to_json(const ExperimentReport& report) {
  json results = json::object();
  for (const auto& er : report.estimators) {
    json entry = aggregates_json(er.aggregates);
    json failures = json::array();
    for (const auto& rec : er.records) {
      if (rec.status == ReplicationStatus::failed) failures.push_back({{"r", rec.r}, {"error", rec.failure}});
    }
    entry["failures"] = std::move(failures);
    results[std::string(estimators::to_string(er.estimator))] = std::move(entry);
  }
  json j = {{"library_version", report.library_version},
            {"rng_stream_version", report.rng_stream_version},
            {"config", config_json(report.config)},
            {"k_n_used", report.k_n_used ? json(report.k_n_used) : json(nullptr)},
            {"results", std::move(results)}};
  return j.dump(2) + "\n";
}

std::string replications_csv(const EstimatorReport& report) {
  std::ostringstream out;
  out << "r,seed,h_hat,ci_low,ci_high,clamped,status\n";
  for (const auto& rec : report.records) {
    out << rec.r << ',' << rec.seed << ',';
    if (rec.status == ReplicationStatus::ok) {
      out << io::format_double(rec.h_hat) << ',' << io::format_double(rec.ci_low) << ','
          << io::format_double(rec.ci_high) << ',' << (rec.clamped ? "true" : "false") << ",ok\n";
    } else {
      out << ",,,,failed\n";
    }
  }
  return out.str();
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_text(dir / "report.json", report_to_json(report));
  if (report.estimators.size() == 1) {
    io::write_text(dir / "replications.csv", replications_csv(report.estimators.front()));
    return;
  }
  for (const auto& er : report.estimators) {
    io::write_text(dir / ("replications_" + std::string(estimators::to_string(er.estimator)) + ".csv"),
                   replications_csv(er));
  }
}

}  // namespace hurst_sde::harness
