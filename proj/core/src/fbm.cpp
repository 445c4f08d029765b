#include <hurst_sde/fbm.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <memory>
#include <mutex>

namespace hurst_sde::fbm {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

ComplexBuffer allocate_complex(std::size_t size) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size));
  if (p == nullptr) throw std::bad_alloc();
  return ComplexBuffer(p);
}

// In-place forward DFT of `data`.
void forward_dft(fftw_complex* data, std::size_t size) {
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(size), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw InternalError("FFTW failed to create a plan");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

double abs_pow(double x, double exponent) { return std::pow(std::abs(x), exponent); }

void check_grid(std::size_t n, double horizon) {
  if (n < 2) throw ArgumentError("fBm generation needs n >= 2");
  if (!(horizon > 0.0)) throw ArgumentError("horizon T must be positive");
}

SamplePath integrate_increments(const std::vector<double>& increments, double horizon) {
  std::vector<double> values(increments.size() + 1, 0.0);
  for (std::size_t k = 0; k < increments.size(); ++k) values[k + 1] = values[k] + increments[k];
  return SamplePath(horizon, std::move(values));
}

}  // namespace

double fbm_covariance(HurstIndex h, double s, double t) {
  if (s < 0.0 || t < 0.0) throw ArgumentError("fBm covariance needs nonnegative times");
  const double e = h.twice();
  return 0.5 * (std::pow(s, e) + std::pow(t, e) - std::pow(std::abs(t - s), e));
}

double increment_autocovariance(HurstIndex h, double step, long lag) {
  const double e = h.twice();
  const double l = static_cast<double>(std::abs(lag));
  return 0.5 * std::pow(step, e) * (abs_pow(l + 1.0, e) - 2.0 * abs_pow(l, e) + abs_pow(l - 1.0, e));
}

namespace {

constexpr double kSeriesLag = 8.0;

// sum_d c_d |a + d|^e with c = (1, -4, 6, -4, 1) over d = -2..2. Far from the
// origin the direct form cancels badly, so expand in powers of 1/a:
// a^e sum_m binom(e, 2m) (2^{2m+1} - 8) a^{-2m}.
double fourth_difference(double a, double e) {
  if (a < kSeriesLag) {
    return abs_pow(a - 2.0, e) - 4.0 * abs_pow(a - 1.0, e) + 6.0 * abs_pow(a, e) -
           4.0 * abs_pow(a + 1.0, e) + abs_pow(a + 2.0, e);
  }
  const double inv_sq = 1.0 / (a * a);
  double binom = e * (e - 1.0) / 2.0;
  double power = inv_sq;
  double sum = 0.0;
  for (int m = 2; m < 60; ++m) {
    const double k = 2.0 * m;
    binom *= (e - k + 2.0) * (e - k + 1.0) / ((k - 1.0) * k);
    power *= inv_sq;
    const double term = binom * (std::ldexp(1.0, 2 * m + 1) - 8.0) * power;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return std::pow(a, e) * sum;
}

}  // namespace

double rho(HurstIndex h, long j) {
  if (j == 0) return 1.0;
  // Evaluate at |j| so that rho(j) and rho(-j) agree bit for bit.
  const double e = h.twice();
  const double a = static_cast<double>(std::abs(j));
  return -fourth_difference(a, e) / (2.0 * (4.0 - std::pow(2.0, e)));
}

double sigma_sq(HurstIndex h, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("sigma_sq tolerance must be positive");
  // rho(j)^2 ~ C j^{-p}, p = 8 - 4H, so sum_{i>j} rho(i)^2 <= rho(j)^2 j / (p - 1).
  const double tail_factor = 1.0 / (7.0 - 4.0 * h.value());
  constexpr long kMinTerms = 8;
  double sum = 0.0;
  for (long j = 1; j <= kSigmaSqMaxTerms; ++j) {
    const double r = rho(h, j);
    sum += r * r;
    const double tail = r * r * static_cast<double>(j) * tail_factor;
    if (j >= kMinTerms && 4.0 * tail < tol) break;
  }
  return 2.0 * (1.0 + 2.0 * sum);
}

double abs_rho_sum(HurstIndex h) {
  if (h.value() >= 0.5) return 2.0;
  const double e = h.twice();
  const double p2 = std::pow(2.0, e);
  return 1.0 + (10.0 - 7.0 * p2 + 2.0 * std::pow(3.0, e)) / (4.0 - p2);
}

std::vector<double> circulant_eigenvalues(HurstIndex h, std::size_t n) {
  if (n < 1) throw ArgumentError("embedding needs at least one increment");
  const std::size_t size = 2 * n;
  auto buffer = allocate_complex(size);
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t lag = k <= n ? k : size - k;
    buffer[k][0] = increment_autocovariance(h, 1.0, static_cast<long>(lag));
    buffer[k][1] = 0.0;
  }
  forward_dft(buffer.get(), size);
  std::vector<double> eigenvalues(size);
  for (std::size_t k = 0; k < size; ++k) eigenvalues[k] = buffer[k][0];
  return eigenvalues;
}

EmbeddingDiagnostics sanitize_eigenvalues(std::span<double> eigenvalues) {
  EmbeddingDiagnostics diag;
  if (eigenvalues.empty()) return diag;
  const auto [lo, hi] = std::minmax_element(eigenvalues.begin(), eigenvalues.end());
  diag.min_eigenvalue = *lo;
  diag.max_eigenvalue = *hi;
  const double floor = -kNegativeEigenvalueTolerance * std::max(diag.max_eigenvalue, 0.0);
  for (double& ev : eigenvalues) {
    if (ev >= 0.0) continue;
    if (ev >= floor) {
      ev = 0.0;
      ++diag.clamped;
    } else {
      diag.acceptable = false;
    }
  }
  return diag;
}

SamplePath generate_fbm(HurstIndex h, std::size_t n, double horizon, std::uint64_t seed) {
  Rng rng(seed);
  return generate_fbm(h, n, horizon, rng);
}

SamplePath generate_fbm(HurstIndex h, std::size_t n, double horizon, Rng& rng) {
  check_grid(n, horizon);
  std::vector<double> eigenvalues = circulant_eigenvalues(h, n);
  const EmbeddingDiagnostics diag = sanitize_eigenvalues(eigenvalues);
  if (!diag.acceptable) {
    std::clog << "hurst_sde: warning: circulant embedding not nonnegative definite (H="
              << h.value() << ", n=" << n << ", min eigenvalue " << diag.min_eigenvalue
              << "); using Cholesky generator\n";
    return generate_fbm_cholesky(h, n, horizon, rng);
  }

  const std::size_t size = eigenvalues.size();
  auto buffer = allocate_complex(size);
  const double inv_size = 1.0 / static_cast<double>(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double amplitude = std::sqrt(eigenvalues[k] * inv_size);
    buffer[k][0] = amplitude * rng.normal();
    buffer[k][1] = amplitude * rng.normal();
  }
  forward_dft(buffer.get(), size);

  // Unit-spacing increments scale to spacing T/n by self-similarity.
  const double scale = std::pow(horizon / static_cast<double>(n), h.value());
  std::vector<double> increments(n);
  for (std::size_t k = 0; k < n; ++k) increments[k] = scale * buffer[k][0];
  return integrate_increments(increments, horizon);
}

std::vector<double> increment_covariance_matrix(HurstIndex h, std::size_t n, double horizon) {
  check_grid(n, horizon);
  const double step = horizon / static_cast<double>(n);
  std::vector<double> lags(n);
  for (std::size_t l = 0; l < n; ++l) lags[l] = increment_autocovariance(h, step, static_cast<long>(l));
  std::vector<double> matrix(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) matrix[i * n + j] = lags[i > j ? i - j : j - i];
  }
  return matrix;
}

SamplePath generate_fbm_cholesky(HurstIndex h, std::size_t n, double horizon, std::uint64_t seed) {
  Rng rng(seed);
  return generate_fbm_cholesky(h, n, horizon, rng);
}

SamplePath generate_fbm_cholesky(HurstIndex h, std::size_t n, double horizon, Rng& rng) {
  check_grid(n, horizon);
  if (n > kCholeskyMaxPoints) {
    throw ArgumentError("Cholesky generator is limited to n <= " + std::to_string(kCholeskyMaxPoints));
  }
  const std::vector<double> entries = increment_covariance_matrix(h, n, horizon);
  const Eigen::Index dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd cov = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                       Eigen::RowMajor>>(entries.data(), dim, dim);

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  double jitter = 1e-14 * cov.diagonal().mean();
  for (int attempt = 0; llt.info() != Eigen::Success && attempt < 6; ++attempt) {
    cov.diagonal().array() += jitter;
    llt.compute(cov);
    jitter *= 10.0;
  }
  if (llt.info() != Eigen::Success) {
    throw InternalError("increment covariance matrix is not positive definite");
  }

  Eigen::VectorXd z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z[i] = rng.normal();
  const Eigen::VectorXd dx = llt.matrixL() * z;
  return integrate_increments(std::vector<double>(dx.data(), dx.data() + dim), horizon);
}

}  // namespace hurst_sde::fbm
