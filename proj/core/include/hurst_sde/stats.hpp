#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hurst_sde::stats {

double normal_cdf(double x) noexcept;

/// z with Phi(z) = p, p in (0, 1).
double normal_quantile(double p);

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

/// Two pass, in input order.
Moments moments(std::span<const double> xs);

/// sup_x |F_n(x) - Phi(x)|.
double ks_distance_normal(std::span<const double> xs);

/// sup_x |F_n(x) - G_m(x)|.
double ks_distance_two_sample(std::span<const double> xs, std::span<const double> ys);

/// Asymptotic Kolmogorov survival function P(sqrt(N) D > lambda).
double kolmogorov_survival(double lambda) noexcept;

/// Asymptotic p-value of the two-sample Kolmogorov-Smirnov test.
double ks_two_sample_pvalue(std::span<const double> xs, std::span<const double> ys);

/// Least-squares slope of y on x.
double ols_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace hurst_sde::stats
