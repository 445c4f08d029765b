#pragma once

#include <hurst_sde/functions.hpp>
#include <hurst_sde/hurst_index.hpp>
#include <hurst_sde/models.hpp>
#include <hurst_sde/sample_path.hpp>

#include <cstddef>
#include <optional>
#include <string_view>

namespace hurst_sde::estimators {

enum class Estimator { h1, h2 };

std::string_view to_string(Estimator e) noexcept;

/// Bracket (delta, 1 - delta) for inverting phi and clamping H^(2).
inline constexpr double kBracketDelta = 1e-6;

struct Interval {
  double low = 0.0;
  double high = 0.0;

  bool contains(double x) const noexcept { return low <= x && x <= high; }
  double width() const noexcept { return high - low; }
};

struct EstimationResult {
  Estimator estimator = Estimator::h1;
  double h_hat = 0.0;
  Interval ci;
  double level = 0.0;
  /// Mean squared normalized second difference for h1, the ratio statistic for h2.
  double raw_statistic = 0.0;
  /// Raw statistic was outside the invertible range (h1) or the log landed
  /// outside [delta, 1 - delta] (h2).
  bool clamped = false;
  std::size_t n = 0;
  double horizon = 0.0;
  std::optional<std::size_t> k_n;
};

/// phi_{n,T}(x) = (T/n)^{2x} (4 - 2^{2x}); strictly decreasing in x for n > T.
double phi(std::size_t n, double horizon, double x);

struct PhiInverse {
  double x = 0.0;
  bool clamped = false;
};

/// Root of phi_{n,T}(x) = y by bisection on (delta, 1 - delta). Values of y
/// outside phi's range on the bracket return the nearer endpoint, clamped.
PhiInverse phi_inv(std::size_t n, double horizon, double y);

/// H^(1) for a known diffusion coefficient g:
/// phi^{-1}( (1/n) sum_{i=2}^n (Delta2 X_{t_i} / g(X_{t_{i-1}}))^2 ).
EstimationResult estimate_h1(const SamplePath& path, const ScalarFunction& g, double level = 0.95);

/// W_{n,k}: sum of the 2k_n - 1 squared fine-grid second differences at fine
/// indices k k_n + j, j = -k_n + 2..k_n. Valid for 1 <= k <= n - 1.
double window_energy(const models::NestedObservations& obs, std::size_t k);

/// W_{n,k} normalized by its expectation under X = B^H:
/// m_n^{2H} / (2 k_n T^{2H} (4 - 2^{2H})) W_{n,k}.
double windowed_v_stat(const models::NestedObservations& obs, HurstIndex h, std::size_t k);

/// H^(2) for unknown diffusion:
/// 1/2 + ln( (2/n) sum_{k=2}^n (Delta2 X_{t_k})^2 / W_{n,k-1} ) / (2 ln k_n).
EstimationResult estimate_h2(const models::NestedObservations& obs, double level = 0.95);

struct VStatistic {
  double value = 0.0;
  /// H = 1/2 was requested. The normalization is finite there and the value
  /// is still computed.
  bool brownian_case = false;
};

/// V_{n,T} = n^{2H-1} / (T^{2H} (4 - 2^{2H})) sum_{k=2}^n (Delta2 B_{t_k})^2.
VStatistic v_stat(const SamplePath& path, HurstIndex h);

/// (n-1)^{-1/2} sum_{k=2}^n (Y_{k,n}^2 - 1) with Y the second differences
/// standardized to unit variance.
double concentration_statistic(const SamplePath& path, HurstIndex h);

/// Two-sided level interval h_hat +- z sigma_{h_hat} / (2 sqrt(n) ln(n/T)),
/// intersected with (0, 1). Requires n > T e.
Interval asymptotic_ci(double h_hat, std::size_t n, double horizon, double level);

/// Same with the rate 2 sqrt(n) ln k_n of the nested-grid estimator.
Interval asymptotic_ci_nested(double h_hat, std::size_t n, std::size_t k_n, double level);

/// 2 exp(-z^2 / ((32/3)(z / sqrt(n-1) + 1))), a bound on
/// P(|concentration_statistic| > z) valid for every H in (0, 1).
double concentration_bound(double z, std::size_t n);

}  // namespace hurst_sde::estimators
