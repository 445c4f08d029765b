#pragma once

#include <hurst_sde/hurst_index.hpp>
#include <hurst_sde/rng.hpp>
#include <hurst_sde/sample_path.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hurst_sde::fbm {

/// sup over H of sum_j |rho_H(j)|, the constant in the concentration bound.
inline constexpr double kKappa = 8.0 / 3.0;

/// Largest n accepted by the dense Cholesky generator.
inline constexpr std::size_t kCholeskyMaxPoints = 4096;

/// E[B_s B_t] = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2.
double fbm_covariance(HurstIndex h, double s, double t);

/// Covariance of fBm increments over a grid of spacing `step` at integer lag.
double increment_autocovariance(HurstIndex h, double step, long lag);

/// Correlation of standardized second differences at lag j:
/// -(|j-2|^{2H} - 4|j-1|^{2H} + 6|j|^{2H} - 4|j+1|^{2H} + |j+2|^{2H}) / (2(4 - 2^{2H})).
double rho(HurstIndex h, long j);

/// Asymptotic variance 2(1 + 2 sum_{j>=1} rho^2(j)) of sqrt(n)(V_{n,T} - 1).
///
/// The series is truncated once a power-law bound on the remaining tail drops
/// below `tol`, or after kSigmaSqMaxTerms terms.
double sigma_sq(HurstIndex h, double tol = 1e-12);
inline constexpr long kSigmaSqMaxTerms = 1'000'000;

/// Closed form of sum_{j in Z} |rho_H(j)|; equal to 2 for H >= 1/2.
double abs_rho_sum(HurstIndex h);

/// How the circulant embedding turned out for a given (H, n).
struct EmbeddingDiagnostics {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::size_t clamped = 0;  ///< tiny negative eigenvalues set to zero
  bool acceptable = true;   ///< false when some eigenvalue is below the tolerance
};

/// Eigenvalues below -kNegativeEigenvalueTolerance * max are treated as a
/// failed embedding; anything between that and zero is clamped.
inline constexpr double kNegativeEigenvalueTolerance = 1e-10;

/// Eigenvalues of the minimal circulant embedding (size 2n) of the
/// autocovariance of n unit-spacing fBm increments. Negative entries are left
/// as computed.
std::vector<double> circulant_eigenvalues(HurstIndex h, std::size_t n);

/// Clamp tiny negatives in place and report whether the embedding is usable.
EmbeddingDiagnostics sanitize_eigenvalues(std::span<double> eigenvalues);

/// Exact fBm sample on t_k = kT/n by circulant embedding of the increments.
/// Falls back to the Cholesky generator (with a warning on stderr) when the
/// embedding is not nonnegative definite.
SamplePath generate_fbm(HurstIndex h, std::size_t n, double horizon, std::uint64_t seed);
SamplePath generate_fbm(HurstIndex h, std::size_t n, double horizon, Rng& rng);

/// Dense-factorization generator; test oracle for generate_fbm. n <= 4096.
SamplePath generate_fbm_cholesky(HurstIndex h, std::size_t n, double horizon, std::uint64_t seed);
SamplePath generate_fbm_cholesky(HurstIndex h, std::size_t n, double horizon, Rng& rng);

/// Dense n x n covariance of the increments (row-major), as used by the
/// Cholesky generator.
std::vector<double> increment_covariance_matrix(HurstIndex h, std::size_t n, double horizon);

}  // namespace hurst_sde::fbm
