#include <hurst_sde/estimators.hpp>
#include <hurst_sde/fbm.hpp>
#include <hurst_sde/stats.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hurst_sde::estimators {

namespace {

constexpr int kBisectionMaxIterations = 100;

// (4 - 2^{2H}), the variance of a unit-spacing second difference of fBm.
double second_difference_factor(double h) { return 4.0 - std::pow(2.0, 2.0 * h); }

void check_level(double level) {
  if (!(level >= 0.0 && level < 1.0)) throw ArgumentError("confidence level must lie in [0, 1)");
}

double two_sided_z(double level) {
  check_level(level);
  return level == 0.0 ? 0.0 : stats::normal_quantile(0.5 * (1.0 + level));
}

Interval centered_interval(double h_hat, double half_width) {
  return {std::max(h_hat - half_width, 0.0), std::min(h_hat + half_width, 1.0)};
}

}  // namespace

std::string_view to_string(Estimator e) noexcept { return e == Estimator::h1 ? "h1" : "h2"; }

double phi(std::size_t n, double horizon, double x) {
  if (!(horizon > 0.0)) throw ArgumentError("horizon T must be positive");
  if (!(static_cast<double>(n) > horizon)) throw ArgumentError("phi_{n,T} needs n > T");
  if (!(x > 0.0 && x < 1.0)) throw ArgumentError("phi_{n,T} is defined on (0, 1)");
  return std::pow(horizon / static_cast<double>(n), 2.0 * x) * second_difference_factor(x);
}

PhiInverse phi_inv(std::size_t n, double horizon, double y) {
  if (!(y > 0.0)) throw ArgumentError("phi_inv needs a positive argument");
  double lo = kBracketDelta;
  double hi = 1.0 - kBracketDelta;
  if (y >= phi(n, horizon, lo)) return {lo, true};
  if (y <= phi(n, horizon, hi)) return {hi, true};
  // phi is decreasing; run until the bracket collapses to adjacent doubles,
  // which is far below the 1e-12 target.
  for (int it = 0; it < kBisectionMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (phi(n, horizon, mid) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

EstimationResult estimate_h1(const SamplePath& path, const ScalarFunction& g, double level) {
  const std::size_t n = path.n();
  if (n < 3) throw ArgumentError("estimate_h1 needs n >= 3");
  if (!(static_cast<double>(n) > path.horizon())) throw ArgumentError("estimate_h1 needs n > T");
  if (!g) throw ArgumentError("estimate_h1 needs the diffusion coefficient g");
  check_level(level);

  double sum = 0.0;
  for (std::size_t i = 2; i <= n; ++i) {
    const double x_prev = path[i - 1];
    const double gi = g(x_prev);
    if (models::diffusion_degenerate(gi, x_prev)) {
      throw DegeneracyError("g(X) below the degeneracy guard", i - 1);
    }
    const double r = path.second_difference(i) / gi;
    sum += r * r;
  }
  const double raw = sum / static_cast<double>(n);
  if (!std::isfinite(raw)) throw DataError("non-finite quadratic variation");

  EstimationResult res;
  res.estimator = Estimator::h1;
  res.raw_statistic = raw;
  res.level = level;
  res.n = n;
  res.horizon = path.horizon();
  if (raw <= 0.0) {
    res.h_hat = 1.0 - kBracketDelta;
    res.clamped = true;
  } else {
    const PhiInverse inv = phi_inv(n, path.horizon(), raw);
    res.h_hat = inv.x;
    res.clamped = inv.clamped;
  }
  res.ci = asymptotic_ci(res.h_hat, n, path.horizon(), level);
  return res;
}

double window_energy(const models::NestedObservations& obs, std::size_t k) {
  if (k < 1 || k + 1 > obs.n()) {
    throw ArgumentError("window index k must lie in [1, n-1], got " + std::to_string(k));
  }
  const std::span<const double> v = obs.values();
  const std::size_t first = (k - 1) * obs.k_n() + 2;  // k k_n + (-k_n + 2)
  const std::size_t last = (k + 1) * obs.k_n();       // k k_n + k_n
  double sum = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const double d = v[i] - 2.0 * v[i - 1] + v[i - 2];
    sum += d * d;
  }
  return sum;
}

double windowed_v_stat(const models::NestedObservations& obs, HurstIndex h, std::size_t k) {
  const double e = h.twice();
  const double norm = std::pow(static_cast<double>(obs.m_n()), e) /
                      (2.0 * static_cast<double>(obs.k_n()) * std::pow(obs.horizon(), e) *
                       second_difference_factor(h.value()));
  return norm * window_energy(obs, k);
}

EstimationResult estimate_h2(const models::NestedObservations& obs, double level) {
  const std::size_t n = obs.n();
  const std::size_t k_n = obs.k_n();
  if (n < 2) throw ArgumentError("estimate_h2 needs n >= 2");
  if (k_n < 2) throw ArgumentError("estimate_h2 needs k_n >= 2");
  check_level(level);

  double sum = 0.0;
  for (std::size_t k = 2; k <= n; ++k) {
    const double w = window_energy(obs, k - 1);
    if (!(w > 0.0)) {
      throw DataError("window energy W_{n," + std::to_string(k - 1) + "} is zero");
    }
    const double d = obs.coarse(k) - 2.0 * obs.coarse(k - 1) + obs.coarse(k - 2);
    sum += d * d / w;
  }
  const double raw = 2.0 * sum / static_cast<double>(n);
  if (!std::isfinite(raw)) throw DataError("non-finite window ratio statistic");

  EstimationResult res;
  res.estimator = Estimator::h2;
  res.raw_statistic = raw;
  res.level = level;
  res.n = n;
  res.horizon = obs.horizon();
  res.k_n = k_n;
  const double unclamped =
      raw > 0.0 ? 0.5 + std::log(raw) / (2.0 * std::log(static_cast<double>(k_n))) : -INFINITY;
  res.h_hat = std::clamp(unclamped, kBracketDelta, 1.0 - kBracketDelta);
  res.clamped = res.h_hat != unclamped;
  res.ci = asymptotic_ci_nested(res.h_hat, n, k_n, level);
  return res;
}

VStatistic v_stat(const SamplePath& path, HurstIndex h) {
  const std::size_t n = path.n();
  if (n < 3) throw ArgumentError("v_stat needs n >= 3");
  double sum = 0.0;
  for (std::size_t k = 2; k <= n; ++k) {
    const double d = path.second_difference(k);
    sum += d * d;
  }
  const double e = h.twice();
  const double norm = std::pow(static_cast<double>(n), e - 1.0) /
                      (std::pow(path.horizon(), e) * second_difference_factor(h.value()));
  return {norm * sum, h.value() == 0.5};
}

double concentration_statistic(const SamplePath& path, HurstIndex h) {
  const std::size_t n = path.n();
  if (n < 2) throw ArgumentError("concentration statistic needs n >= 2");
  const double scale = std::pow(static_cast<double>(n) / path.horizon(), h.value()) /
                       std::sqrt(second_difference_factor(h.value()));
  double sum = 0.0;
  for (std::size_t k = 2; k <= n; ++k) {
    const double y = scale * path.second_difference(k);
    sum += y * y - 1.0;
  }
  return sum / std::sqrt(static_cast<double>(n - 1));
}

Interval asymptotic_ci(double h_hat, std::size_t n, double horizon, double level) {
  if (!(horizon > 0.0)) throw ArgumentError("horizon T must be positive");
  const double log_ratio = std::log(static_cast<double>(n) / horizon);
  if (!(log_ratio > 1.0)) throw RateDegeneracyError("asymptotic interval needs n > T e");
  const double z = two_sided_z(level);
  const double sigma = std::sqrt(fbm::sigma_sq(HurstIndex(h_hat), 1e-10));
  return centered_interval(h_hat, z * sigma / (2.0 * std::sqrt(static_cast<double>(n)) * log_ratio));
}

Interval asymptotic_ci_nested(double h_hat, std::size_t n, std::size_t k_n, double level) {
  if (k_n < 2) throw RateDegeneracyError("nested asymptotic interval needs k_n >= 2");
  if (n < 1) throw ArgumentError("nested asymptotic interval needs n >= 1");
  const double z = two_sided_z(level);
  const double sigma = std::sqrt(fbm::sigma_sq(HurstIndex(h_hat), 1e-10));
  const double rate = 2.0 * std::sqrt(static_cast<double>(n)) * std::log(static_cast<double>(k_n));
  return centered_interval(h_hat, z * sigma / rate);
}

double concentration_bound(double z, std::size_t n) {
  if (!(z > 0.0)) throw ArgumentError("concentration bound needs z > 0");
  if (n < 2) throw ArgumentError("concentration bound needs n >= 2");
  const double denom = (32.0 / 3.0) * (z / std::sqrt(static_cast<double>(n - 1)) + 1.0);
  return 2.0 * std::exp(-z * z / denom);
}

}  // namespace hurst_sde::estimators
