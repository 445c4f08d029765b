#include <hurst_sde/models.hpp>

#include <cmath>
#include <string>

namespace hurst_sde::models {

ModelSpec ModelSpec::generic(ScalarFunction drift, ScalarFunction diffusion, double xi) {
  if (!drift || !diffusion) throw ArgumentError("generic model needs both drift and diffusion");
  if (!std::isfinite(xi)) throw ArgumentError("initial value must be finite");
  ModelSpec m;
  m.kind_ = ModelKind::generic;
  m.drift_ = std::move(drift);
  m.diffusion_ = std::move(diffusion);
  m.xi_ = xi;
  return m;
}

ModelSpec ModelSpec::verhulst(double lambda, double sigma, double xi) {
  if (!std::isfinite(lambda)) throw ArgumentError("Verhulst lambda must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ArgumentError("Verhulst sigma must be positive");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw ArgumentError("Verhulst initial value must be positive");
  ModelSpec m;
  m.kind_ = ModelKind::verhulst;
  m.drift_ = ScalarFunction::logistic(lambda);
  m.diffusion_ = ScalarFunction::linear(sigma);
  m.xi_ = xi;
  m.verhulst_ = {lambda, sigma, xi};
  return m;
}

ModelSpec ModelSpec::as_generic() const {
  ModelSpec m = *this;
  m.kind_ = ModelKind::generic;
  return m;
}

SamplePath simulate_euler(const ModelSpec& model, const SamplePath& driver, EulerOptions options) {
  if (model.kind() != ModelKind::generic) {
    throw ArgumentError("simulate_euler expects a generic model; use as_generic() for Verhulst");
  }
  const std::span<const double> b = driver.values();
  const double h = driver.step();
  const auto& f = model.drift();
  const auto& g = model.diffusion();

  std::vector<double> x(b.size());
  x[0] = model.initial_value();
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const double xk = x[k];
    const double gk = g(xk);
    if (options.check_diffusion && diffusion_degenerate(gk, xk)) {
      throw DegeneracyError("diffusion coefficient vanished along the path", k);
    }
    // Same as xk + f h + g (b[k+1] - b[k]), arranged so that g = 1, f = 0
    // reproduces the driver bit for bit.
    const double next = (xk - gk * b[k]) + gk * b[k + 1] + f(xk) * h;
    if (!std::isfinite(next)) throw SimulationError("Euler scheme produced a non-finite value", k + 1);
    x[k + 1] = next;
  }
  return SamplePath(driver.horizon(), std::move(x));
}

SamplePath verhulst_exact(double lambda, double sigma, double xi, const SamplePath& driver) {
  if (!(xi > 0.0)) throw ArgumentError("Verhulst initial value must be positive");
  if (!(sigma > 0.0)) throw ArgumentError("Verhulst sigma must be positive");
  const std::span<const double> b = driver.values();
  const double half_step = 0.5 * driver.step();

  std::vector<double> x(b.size());
  x[0] = xi;
  double previous = 1.0;  // exp(lambda * 0 + sigma * B_0) with B_0 = 0
  double integral = 0.0;
  for (std::size_t k = 1; k < b.size(); ++k) {
    const double current = std::exp(lambda * driver.time(k) + sigma * b[k]);
    integral += half_step * (previous + current);
    const double value = xi * current / (1.0 + xi * integral);
    if (!std::isfinite(value) || !(value > 0.0)) {
      throw SimulationError("Verhulst solution left the positive finite range", k);
    }
    x[k] = value;
    previous = current;
  }
  return SamplePath(driver.horizon(), std::move(x));
}

SamplePath simulate(const ModelSpec& model, const SamplePath& driver) {
  if (model.kind() == ModelKind::verhulst) {
    const auto& p = model.verhulst_params();
    return verhulst_exact(p.lambda, p.sigma, p.xi, driver);
  }
  return simulate_euler(model, driver);
}

NestedObservations::NestedObservations(std::size_t n, std::size_t k_n, double horizon,
                                       std::vector<double> values)
    : n_(n), k_n_(k_n), horizon_(horizon), values_(std::move(values)) {
  if (n_ < 1 || k_n_ < 1) throw ArgumentError("nested observations need n >= 1 and k_n >= 1");
  if (!(horizon_ > 0.0)) throw ArgumentError("horizon T must be positive");
  if (values_.size() != n_ * k_n_ + 1) {
    throw ArgumentError("nested observations need n*k_n + 1 = " + std::to_string(n_ * k_n_ + 1) +
                        " values, got " + std::to_string(values_.size()));
  }
}

SamplePath NestedObservations::coarse_path() const {
  std::vector<double> out(n_ + 1);
  for (std::size_t k = 0; k <= n_; ++k) out[k] = coarse(k);
  return SamplePath(horizon_, std::move(out));
}

SamplePath NestedObservations::fine_path() const { return SamplePath(horizon_, values_); }

NestedObservations NestedObservations::scaled(double c) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= c;
  return NestedObservations(n_, k_n_, horizon_, std::move(out));
}

std::size_t min_k_n(std::size_t n) {
  const double nd = static_cast<double>(n);
  return n < 2 ? 1 : static_cast<std::size_t>(std::ceil(nd * std::log(nd)));
}

std::size_t square_schedule(std::size_t n) { return n * n; }

std::size_t log_schedule(std::size_t n, double theta) {
  if (!(theta > 1.0)) throw ArgumentError("log schedule needs theta > 1");
  if (n < 2) return 1;
  return n * static_cast<std::size_t>(std::ceil(std::pow(std::log(static_cast<double>(n)), theta)));
}

NestedObservations sample_nested(const ModelSpec& model, HurstIndex h, std::size_t n,
                                 std::size_t k_n, double horizon, std::uint64_t seed,
                                 NestedOptions options) {
  Rng rng(seed);
  return sample_nested(model, h, n, k_n, horizon, rng, options);
}

NestedObservations sample_nested(const ModelSpec& model, HurstIndex h, std::size_t n,
                                 std::size_t k_n, double horizon, Rng& rng,
                                 NestedOptions options) {
  if (n < 2) throw ArgumentError("nested sampling needs n >= 2");
  if (k_n < 1) throw ArgumentError("k_n must be positive");
  if (!options.allow_small_k_n && k_n < min_k_n(n)) {
    throw ArgumentError("k_n = " + std::to_string(k_n) + " is below ceil(n ln n) = " +
                        std::to_string(min_k_n(n)) + "; set the override to allow it");
  }
  const std::size_t m = n * k_n;
  if (m / k_n != n || m + 1 > options.max_points) {
    throw ArgumentError("fine grid of " + std::to_string(m) + " intervals exceeds the cap of " +
                        std::to_string(options.max_points) + " points");
  }
  SamplePath driver = fbm::generate_fbm(h, m, horizon, rng);
  SamplePath x = simulate(model, driver);
  NestedObservations obs(n, k_n, horizon, std::vector<double>(x.values().begin(), x.values().end()));
  if (options.keep_driver) obs.set_driver(std::move(driver));
  return obs;
}

}  // namespace hurst_sde::models
