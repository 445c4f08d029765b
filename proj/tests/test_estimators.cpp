#include "support/oracles.hpp"

#include <hurst_sde/estimators.hpp>
#include <hurst_sde/fbm.hpp>
#include <hurst_sde/models.hpp>
#include <hurst_sde/stats.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace hurst_sde {
namespace {

using namespace estimators;
using models::ModelSpec;
using models::NestedObservations;

NestedObservations pure_fbm_nested(double hv, std::size_t n, std::size_t k_n, std::uint64_t seed) {
  const auto driver = fbm::generate_fbm(HurstIndex(hv), n * k_n, 1.0, seed);
  return NestedObservations(n, k_n, 1.0, std::vector<double>(driver.values().begin(), driver.values().end()));
}

TEST(Phi, KnownValues) {
  EXPECT_DOUBLE_EQ(phi(100, 1.0, 0.5), 0.02);
  // 0.01^{1.5} (4 - 2^{1.5}) to 40 digits: 0.0011715728752538099023966...
  EXPECT_NEAR(phi(100, 1.0, 0.75), 1.1715728752538099e-3, 1e-18);
}

TEST(Phi, DomainErrors) {
  EXPECT_THROW(phi(1, 1.0, 0.5), ArgumentError);
  EXPECT_THROW(phi(10, 10.0, 0.5), ArgumentError);
  EXPECT_THROW(phi(100, 1.0, 0.0), ArgumentError);
  EXPECT_THROW(phi(100, 1.0, 1.0), ArgumentError);
}

TEST(Phi, StrictlyDecreasing) {
  for (std::size_t n : {2u, 50u, 5000u}) {
    for (double t : {0.5, 1.0, 1.9}) {
      double prev = phi(n, t, 1e-4);
      for (double x = 2e-4; x < 1.0 - 1e-4; x += 1e-4) {
        const double cur = phi(n, t, x);
        ASSERT_LT(cur, prev) << n << " " << t << " " << x;
        prev = cur;
      }
    }
  }
}

TEST(PhiInv, RoundTripAndClamp) {
  EXPECT_NEAR(phi_inv(1000, 1.0, phi(1000, 1.0, 0.7)).x, 0.7, 1e-10);
  EXPECT_FALSE(phi_inv(1000, 1.0, phi(1000, 1.0, 0.7)).clamped);

  const auto high = phi_inv(1000, 1.0, 2.0 * phi(1000, 1.0, kBracketDelta));
  EXPECT_EQ(high.x, kBracketDelta);
  EXPECT_TRUE(high.clamped);
  const auto low = phi_inv(1000, 1.0, 0.5 * phi(1000, 1.0, 1.0 - kBracketDelta));
  EXPECT_EQ(low.x, 1.0 - kBracketDelta);
  EXPECT_TRUE(low.clamped);

  EXPECT_THROW(phi_inv(1000, 1.0, 0.0), ArgumentError);
  EXPECT_THROW(phi_inv(1000, 1.0, -1.0), ArgumentError);
}

TEST(PhiInv, RandomRoundTrips) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> xs(0.05, 0.95);
  const std::size_t ns[] = {50, 500, 5000};
  const double ts[] = {0.5, 1.0, 10.0};
  for (int i = 0; i < 1000; ++i) {
    const double x = xs(gen);
    const std::size_t n = ns[i % 3];
    const double t = ts[(i / 3) % 3];
    const auto inv = phi_inv(n, t, phi(n, t, x));
    ASSERT_FALSE(inv.clamped);
    ASSERT_LT(std::abs(inv.x - x), 1e-9) << n << " " << t << " " << x;
  }
}

TEST(EstimateH1, IdentityWithVStatisticOnPureFbm) {
  const auto g = ScalarFunction::parse("const:1");
  for (double hv : {0.6, 0.7, 0.85}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const HurstIndex h(hv);
      const auto path = fbm::generate_fbm(h, 4096, 1.0, s);
      const auto res = estimate_h1(path, g);
      ASSERT_FALSE(res.clamped);
      const double lhs = phi(4096, 1.0, res.h_hat);
      const double rhs = phi(4096, 1.0, hv) * v_stat(path, h).value;
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-12);
    }
  }
}

TEST(EstimateH1, ConstantPathClampsAtUpperEndpoint) {
  const SamplePath flat(1.0, std::vector<double>(101, 3.0));
  const auto res = estimate_h1(flat, ScalarFunction::parse("const:1"));
  EXPECT_EQ(res.raw_statistic, 0.0);
  EXPECT_TRUE(res.clamped);
  EXPECT_EQ(res.h_hat, 1.0 - kBracketDelta);
}

TEST(EstimateH1, ErrorPaths) {
  const auto path = fbm::generate_fbm(HurstIndex(0.7), 100, 1.0, 1);
  EXPECT_THROW(estimate_h1(path, ScalarFunction::parse("zero")), DegeneracyError);
  EXPECT_THROW(estimate_h1(SamplePath(1.0, {0.0, 1.0, 0.5}), ScalarFunction::parse("const:1")), ArgumentError);
  EXPECT_THROW(estimate_h1(fbm::generate_fbm(HurstIndex(0.7), 10, 20.0, 1), ScalarFunction::parse("const:1")),
               ArgumentError);
}

TEST(EstimateH1, KnownConstantDiffusionNormalizes) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto b = fbm::generate_fbm(HurstIndex(0.7), 1000, 1.0, s);
    const auto base = estimate_h1(b, ScalarFunction::parse("const:1"));
    for (double c : {0.25, 8.0, -2.0}) {
      const auto scaled = estimate_h1(b.scaled(c), ScalarFunction::constant(c));
      EXPECT_EQ(scaled.h_hat, base.h_hat);
      EXPECT_EQ(scaled.raw_statistic, base.raw_statistic);
    }
    const auto three = estimate_h1(b.scaled(3.0), ScalarFunction::constant(3.0));
    EXPECT_NEAR(three.h_hat, base.h_hat, 1e-13);
  }
}

TEST(EstimateH1, VerhulstConsistency) {
  const auto model = ModelSpec::verhulst(1.0, 0.5, 1.0);
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto x = models::simulate(model, fbm::generate_fbm(HurstIndex(0.7), 4096, 1.0, s));
    sum += estimate_h1(x, model.diffusion()).h_hat;
  }
  EXPECT_NEAR(sum / 200.0, 0.7, 0.02);
}

TEST(EstimateH1, ErrorShrinksWithN) {
  for (double hv : {0.6, 0.7, 0.8, 0.9}) {
    const HurstIndex h(hv);
    const auto g = ScalarFunction::parse("const:1");
    double small = 0.0, large = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) {
      small += std::abs(estimate_h1(fbm::generate_fbm(h, 512, 1.0, s), g).h_hat - hv);
      large += std::abs(estimate_h1(fbm::generate_fbm(h, 8192, 1.0, 10000 + s), g).h_hat - hv);
    }
    EXPECT_LT(large, small) << hv;
  }
}

TEST(WindowEnergy, AffineObservationsGiveZero) {
  std::vector<double> v(5 * 40 + 1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 3.0 - 2.0 * static_cast<double>(i);
  const NestedObservations obs(5, 40, 1.0, v);
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(window_energy(obs, k), 0.0);
}

TEST(WindowEnergy, TermCountIsTwoKnMinusOne) {
  // Values i^2 / 2 have every second difference equal to 1.
  for (std::size_t k_n : {2u, 7u, 64u}) {
    const std::size_t n = 6;
    std::vector<double> v(n * k_n + 1);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * static_cast<double>(i * i);
    const NestedObservations obs(n, k_n, 1.0, v);
    for (std::size_t k = 1; k < n; ++k) EXPECT_EQ(window_energy(obs, k), 2.0 * k_n - 1.0);
  }
}

TEST(WindowEnergy, RangeChecks) {
  const NestedObservations obs(5, 10, 1.0, std::vector<double>(51, 0.0));
  EXPECT_THROW(window_energy(obs, 0), ArgumentError);
  EXPECT_THROW(window_energy(obs, 5), ArgumentError);
  EXPECT_NO_THROW(window_energy(obs, 4));
}

TEST(WindowEnergy, NormalizedWindowsUniformlyNearOne) {
  const double hv = 0.7;
  const std::size_t n = 30, k_n = 900;
  const double tol = 5.0 * std::sqrt(std::log(static_cast<double>(n)) / k_n);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto obs = pure_fbm_nested(hv, n, k_n, s);
    for (std::size_t k = 1; k < n; ++k) {
      EXPECT_NEAR(windowed_v_stat(obs, HurstIndex(hv), k), 1.0, tol) << s << " " << k;
    }
  }
}

double max_window_deviation(double hv, std::size_t n, std::size_t k_n, int seeds) {
  double acc = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto obs = pure_fbm_nested(hv, n, k_n, 500 + s);
    double m = 0.0;
    for (std::size_t k = 1; k < n; ++k) m = std::max(m, std::abs(windowed_v_stat(obs, HurstIndex(hv), k) - 1.0));
    acc += m;
  }
  return acc / seeds;
}

TEST(WindowEnergy, DeviationShrinksWithRefinement) {
  const std::size_t n = 20;
  const std::size_t log_k = n * static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n))));
  EXPECT_LT(max_window_deviation(0.75, n, n * n, 10), max_window_deviation(0.75, n, log_k, 10));
}

TEST(EstimateH2, ScaleEquivariance) {
  const auto model = ModelSpec::verhulst(1.0, 0.5, 1.0);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto obs = models::sample_nested(model, HurstIndex(0.7), 20, 400, 1.0, s);
    const auto base = estimate_h2(obs);
    for (double c : {-4.0, 0.5, 1024.0}) EXPECT_EQ(estimate_h2(obs.scaled(c)).h_hat, base.h_hat);
    EXPECT_NEAR(estimate_h2(obs.scaled(3.7)).h_hat, base.h_hat, 1e-13);
  }
}

TEST(EstimateH2, PureFbmNearTruth) {
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) sum += estimate_h2(pure_fbm_nested(0.7, 50, 2500, s)).h_hat;
  EXPECT_NEAR(sum / 100.0, 0.7, 0.03);
}

TEST(EstimateH2, ReportsInputsAndInterval) {
  const auto obs = pure_fbm_nested(0.8, 20, 400, 3);
  const auto res = estimate_h2(obs, 0.9);
  EXPECT_EQ(res.estimator, Estimator::h2);
  EXPECT_EQ(res.n, 20u);
  EXPECT_EQ(res.k_n, 400u);
  EXPECT_EQ(res.level, 0.9);
  EXPECT_GT(res.raw_statistic, 0.0);
  EXPECT_FALSE(res.clamped);
  EXPECT_TRUE(res.ci.contains(res.h_hat));
  const auto expected = asymptotic_ci_nested(res.h_hat, 20, 400, 0.9);
  EXPECT_EQ(res.ci.low, expected.low);
  EXPECT_EQ(res.ci.high, expected.high);
}

TEST(EstimateH2, DegenerateData) {
  const NestedObservations flat(10, 100, 1.0, std::vector<double>(1001, 1.0));
  EXPECT_THROW(estimate_h2(flat), DataError);
  const NestedObservations no_refinement(10, 1, 1.0, std::vector<double>(11, 1.0));
  EXPECT_THROW(estimate_h2(no_refinement), ArgumentError);
}

TEST(VStat, SyntheticEqualSecondDifferences) {
  const double hv = 0.7;
  const std::size_t n = 1000;
  const double t = 2.0;
  const double c = std::sqrt(std::pow(t / n, 2 * hv) * (4.0 - std::pow(2.0, 2 * hv)));
  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) v[k] = 0.5 * c * static_cast<double>(k * k);
  const auto stat = v_stat(SamplePath(t, v), HurstIndex(hv));
  EXPECT_NEAR(stat.value, (n - 1.0) / n, 1e-9);
  EXPECT_FALSE(stat.brownian_case);
  EXPECT_TRUE(v_stat(SamplePath(t, v), HurstIndex(0.5)).brownian_case);
  EXPECT_THROW(v_stat(SamplePath(1.0, {0.0, 1.0, 0.0}), HurstIndex(0.7)), ArgumentError);
}

TEST(VStat, AlmostSureLimit) {
  const auto path = fbm::generate_fbm(HurstIndex(0.8), 1u << 14, 1.0, 11);
  EXPECT_LT(std::abs(v_stat(path, HurstIndex(0.8)).value - 1.0), 0.05);
}

TEST(VStat, FiveSigmaBandAcrossH) {
  const std::size_t n = 1u << 14;
  for (double hv = 0.55; hv < 0.96; hv += 0.05) {
    const HurstIndex h(hv);
    const double band = 5.0 * std::sqrt(fbm::sigma_sq(h)) / std::sqrt(static_cast<double>(n));
    const auto path = fbm::generate_fbm(h, n, 1.0, 71);
    EXPECT_LT(std::abs(v_stat(path, h).value - 1.0), band) << hv;
  }
}

TEST(AsymptoticCi, Contracts) {
  const auto zero = asymptotic_ci(0.7, 4096, 1.0, 0.0);
  EXPECT_EQ(zero.low, 0.7);
  EXPECT_EQ(zero.high, 0.7);

  double prev = 1.0;
  for (std::size_t n = 10; n < 100000; n *= 2) {
    const double w = asymptotic_ci(0.7, n, 1.0, 0.95).width();
    EXPECT_LT(w, prev) << n;
    prev = w;
  }
  EXPECT_THROW(asymptotic_ci(0.7, 2, 1.0, 0.95), RateDegeneracyError);
  EXPECT_THROW(asymptotic_ci(0.7, 27, 10.0, 0.95), RateDegeneracyError);
  EXPECT_THROW(asymptotic_ci(0.7, 100, 1.0, 1.0), ArgumentError);

  const double z = stats::normal_quantile(0.975);
  const double half = z * std::sqrt(fbm::sigma_sq(HurstIndex(0.7), 1e-10)) / (2 * std::sqrt(4096.0) * std::log(4096.0));
  const auto ci = asymptotic_ci(0.7, 4096, 1.0, 0.95);
  EXPECT_NEAR(ci.high - 0.7, half, 1e-15);
  EXPECT_NEAR(0.7 - ci.low, half, 1e-15);

  const auto edge = asymptotic_ci(0.999, 10, 1.0, 0.99);
  EXPECT_EQ(edge.high, 1.0);
}

TEST(ConcentrationBound, Shape) {
  EXPECT_NEAR(concentration_bound(1e-9, 100), 2.0, 1e-12);
  double prev = 2.0;
  for (double z = 0.1; z < 20.0; z += 0.1) {
    const double b = concentration_bound(z, 256);
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_THROW(concentration_bound(0.0, 10), ArgumentError);
  EXPECT_THROW(concentration_bound(1.0, 1), ArgumentError);
}

TEST(ConcentrationBound, NeverBelowEmpiricalTail) {
  const HurstIndex h(0.6);
  const std::size_t n = 1024;
  const double z = 2.0;
  constexpr int kSeeds = 2000;
  int exceed = 0;
  for (int s = 0; s < kSeeds; ++s) {
    if (std::abs(concentration_statistic(fbm::generate_fbm(h, n, 1.0, s), h)) > z) ++exceed;
  }
  const double p = static_cast<double>(exceed) / kSeeds;
  const double bound = concentration_bound(z, n);
  EXPECT_LE(p, bound + 3.0 * std::sqrt(bound * (1.0 - std::min(bound, 1.0)) / kSeeds + 1e-300));
}

}  // namespace
}  // namespace hurst_sde
