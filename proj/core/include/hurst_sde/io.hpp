#pragma once

#include <hurst_sde/estimators.hpp>
#include <hurst_sde/models.hpp>
#include <hurst_sde/sample_path.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace hurst_sde::io {

/// Shortest decimal form that reads back to the same double, padded to at
/// least 17 significant digits.
std::string format_double(double x);

/// `t,value` header, one row per grid point, LF endings.
void write_path_csv(std::ostream& out, const SamplePath& path);
void write_path_csv(const std::filesystem::path& file, const SamplePath& path);

/// `i,t,value` header over the fine grid.
void write_nested_csv(std::ostream& out, const models::NestedObservations& obs);
void write_nested_csv(const std::filesystem::path& file, const models::NestedObservations& obs);

/// Values read from either CSV layout. Times must form a uniform grid
/// starting at 0; throws DataError otherwise.
struct ObservedSeries {
  double horizon = 0.0;
  std::vector<double> values;
};

ObservedSeries read_series_csv(std::istream& in);
ObservedSeries read_series_csv(const std::filesystem::path& file);

/// {"kind":"verhulst","lambda":..,"sigma":..,"xi":..} or
/// {"kind":"generic","drift":"<spec>","diffusion":"<spec>","xi":..}.
std::string model_to_json(const models::ModelSpec& model);
models::ModelSpec model_from_json(std::string_view json);

/// JSON sidecar describing a stored simulation.
struct Sidecar {
  std::size_t n = 0;
  std::size_t k_n = 1;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  std::optional<double> hurst;
  std::optional<models::ModelSpec> model;
};

std::string sidecar_to_json(const Sidecar& sidecar);
Sidecar sidecar_from_json(std::string_view json);
Sidecar read_sidecar(const std::filesystem::path& file);

/// {"estimator":..,"h_hat":..,"ci":[low,high],"level":..,"raw_statistic":..,
///  "clamped":..,"n":..,"k_n":..,"T":..}; k_n is null for h1.
std::string estimation_report_json(const estimators::EstimationResult& result);

std::string read_text(const std::filesystem::path& file);
void write_text(const std::filesystem::path& file, std::string_view text);

}  // namespace hurst_sde::io
