#pragma once

#include <hurst_sde/estimators.hpp>
#include <hurst_sde/hurst_index.hpp>
#include <hurst_sde/models.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hurst_sde::harness {

enum class EstimatorChoice { h1, h2, both };

struct ExperimentConfig {
  models::ModelSpec model = models::ModelSpec::verhulst(1.0, 0.5, 1.0);
  double hurst = 0.7;
  EstimatorChoice estimator = EstimatorChoice::h1;
  std::size_t n = 1024;
  /// Refinement for h2; defaults to n^2 when absent.
  std::optional<std::size_t> k_n;
  /// Allow k_n below ceil(n ln n); echoed in the report.
  bool k_n_override = false;
  double horizon = 1.0;
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  double level = 0.95;
  std::filesystem::path out_dir;
  /// Simulation steps per observation interval for h1 (1 = observe every step).
  std::size_t oversample = 1;
};

/// Parse the JSON experiment config (keys model, H, estimator, n, k_n, T,
/// replications, seed, level, out_dir; optional k_n_override, oversample).
ExperimentConfig config_from_json(std::string_view json);
std::string config_to_json(const ExperimentConfig& config);

enum class ReplicationStatus { ok, failed };

struct ReplicationRecord {
  std::size_t r = 0;  ///< 1-based replication index
  std::uint64_t seed = 0;
  ReplicationStatus status = ReplicationStatus::ok;
  double h_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool clamped = false;
  std::string failure;  ///< message of the exception that failed the replication
};

/// Summary over successful replications of one estimator.
struct Aggregates {
  std::size_t replications = 0;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::size_t clamped = 0;
  double mean_h_hat = 0.0;
  double mean_bias = 0.0;
  double rmse = 0.0;
  double coverage = 0.0;
  /// Moments of the standardized errors rate (H_hat - H) / sigma_H.
  double std_error_mean = 0.0;
  double std_error_variance = 0.0;
  double std_error_skewness = 0.0;
  double std_error_excess_kurtosis = 0.0;
  /// Kolmogorov-Smirnov distance of the standardized errors to N(0, 1).
  double ks_normal = 0.0;
};

struct EstimatorReport {
  estimators::Estimator estimator = estimators::Estimator::h1;
  std::vector<ReplicationRecord> records;
  Aggregates aggregates;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t k_n_used = 0;  ///< 0 when h2 was not run
  std::vector<EstimatorReport> estimators;
  std::string library_version;
  int rng_stream_version = 0;
};

/// Fraction of failed replications above which the experiment fails.
inline constexpr double kMaxFailureFraction = 0.20;

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rate multiplying (H_hat - H) in the CLT of the given estimator:
/// 2 sqrt(n) ln(n/T) for h1, 2 sqrt(n) ln k_n for h2.
double clt_rate(estimators::Estimator e, std::size_t n, double horizon, std::size_t k_n);

/// Recompute aggregates from per-replication records, in index order.
Aggregates aggregate(std::span<const ReplicationRecord> records, estimators::Estimator e,
                     double hurst, std::size_t n, double horizon, std::size_t k_n);

struct RunOptions {
  /// Worker threads; 0 reads HURST_SDE_THREADS, falling back to hardware concurrency.
  std::size_t threads = 0;
  /// Write report.json and replications CSV into config.out_dir when set.
  bool write_files = true;
};

ExperimentReport run_experiment(const ExperimentConfig& config, RunOptions options = {});

/// Thread count from HURST_SDE_THREADS, or the hardware default.
std::size_t default_thread_count();

std::string report_to_json(const ExperimentReport& report);

/// `r,seed,h_hat,ci_low,ci_high,clamped,status`.
std::string replications_csv(const EstimatorReport& report);

/// report.json plus replications.csv (single estimator) or
/// replications_h1.csv and replications_h2.csv (both).
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace hurst_sde::harness
