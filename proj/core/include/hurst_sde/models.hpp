#pragma once

#include <hurst_sde/fbm.hpp>
#include <hurst_sde/functions.hpp>
#include <hurst_sde/sample_path.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hurst_sde::models {

enum class ModelKind { generic, verhulst };

struct VerhulstParams {
  double lambda = 1.0;
  double sigma = 0.5;
  double xi = 1.0;
};

/// X_t = xi + int_0^t f(X_s) ds + int_0^t g(X_s) dB^H_s.
///
/// Generic models are integrated with the explicit Euler scheme; the
/// Verhulst model (f = lambda x - x^2, g = sigma x) uses its explicit
/// solution.
class ModelSpec {
 public:
  static ModelSpec generic(ScalarFunction drift, ScalarFunction diffusion, double xi);
  static ModelSpec verhulst(double lambda, double sigma, double xi);

  ModelKind kind() const noexcept { return kind_; }
  const ScalarFunction& drift() const noexcept { return drift_; }
  const ScalarFunction& diffusion() const noexcept { return diffusion_; }
  double initial_value() const noexcept { return xi_; }

  /// Only meaningful for kind() == verhulst.
  const VerhulstParams& verhulst_params() const noexcept { return verhulst_; }

  /// The same equation as a generic model, to be run through Euler.
  ModelSpec as_generic() const;

 private:
  ModelSpec() = default;

  ModelKind kind_ = ModelKind::generic;
  ScalarFunction drift_;
  ScalarFunction diffusion_;
  double xi_ = 0.0;
  VerhulstParams verhulst_{};
};

/// |g(x)| < kDegeneracyScale * (1 + |x|) counts as a degenerate diffusion.
inline constexpr double kDegeneracyScale = 1e-8;

inline bool diffusion_degenerate(double g_value, double x) noexcept {
  return !(std::abs(g_value) >= kDegeneracyScale * (1.0 + std::abs(x)));
}

struct EulerOptions {
  /// Abort with DegeneracyError when |g(X)| hits the guard. Disable only for
  /// deterministic (g = 0) checks.
  bool check_diffusion = true;
};

/// X_{k+1} = X_k + f(X_k) T/n + g(X_k) (B_{k+1} - B_k) on the driver grid.
SamplePath simulate_euler(const ModelSpec& model, const SamplePath& driver,
                          EulerOptions options = {});

/// Explicit Verhulst solution
///   X_t = xi exp(lambda t + sigma B_t) / (1 + xi int_0^t exp(lambda s + sigma B_s) ds)
/// with the integral evaluated by the composite trapezoid rule on the driver grid.
SamplePath verhulst_exact(double lambda, double sigma, double xi, const SamplePath& driver);

/// Solve `model` along `driver`: closed form for Verhulst, Euler otherwise.
SamplePath simulate(const ModelSpec& model, const SamplePath& driver);

/// Observations on the fine grid s_i = iT/m_n, m_n = n k_n, used by the
/// unknown-diffusion estimator. Coarse grid point t_k sits at fine index k k_n.
class NestedObservations {
 public:
  NestedObservations(std::size_t n, std::size_t k_n, double horizon, std::vector<double> values);

  std::size_t n() const noexcept { return n_; }
  std::size_t k_n() const noexcept { return k_n_; }
  std::size_t m_n() const noexcept { return n_ * k_n_; }
  double horizon() const noexcept { return horizon_; }
  std::span<const double> values() const noexcept { return values_; }

  /// X at coarse point t_k.
  double coarse(std::size_t k) const noexcept { return values_[k * k_n_]; }

  /// The trajectory restricted to the coarse grid t_k = kT/n.
  SamplePath coarse_path() const;
  SamplePath fine_path() const;

  NestedObservations scaled(double c) const;

  /// fBm driver on the fine grid, kept when requested from sample_nested.
  const std::optional<SamplePath>& driver() const noexcept { return driver_; }
  void set_driver(SamplePath driver) { driver_ = std::move(driver); }

 private:
  std::size_t n_;
  std::size_t k_n_;
  double horizon_;
  std::vector<double> values_;
  std::optional<SamplePath> driver_;
};

/// ceil(n ln n), the smallest k_n satisfying the growth condition.
std::size_t min_k_n(std::size_t n);

/// k_n = n^2.
std::size_t square_schedule(std::size_t n);

/// k_n = n * ceil(ln(n)^theta).
std::size_t log_schedule(std::size_t n, double theta = 1.5);

struct NestedOptions {
  /// Accept k_n below ceil(n ln n).
  bool allow_small_k_n = false;
  bool keep_driver = false;
  /// Upper bound on m_n + 1 stored points.
  std::size_t max_points = 50'000'000;
};

/// One fBm driver on the m_n grid plus the model solution on it.
NestedObservations sample_nested(const ModelSpec& model, HurstIndex h, std::size_t n,
                                 std::size_t k_n, double horizon, std::uint64_t seed,
                                 NestedOptions options = {});
NestedObservations sample_nested(const ModelSpec& model, HurstIndex h, std::size_t n,
                                 std::size_t k_n, double horizon, Rng& rng,
                                 NestedOptions options = {});

}  // namespace hurst_sde::models
