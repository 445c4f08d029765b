#include "support/oracles.hpp"

#include <hurst_sde/fbm.hpp>
#include <hurst_sde/functions.hpp>
#include <hurst_sde/models.hpp>
#include <hurst_sde/stats.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace hurst_sde {
namespace {

using models::ModelSpec;

double sup_gap(const SamplePath& a, const SamplePath& b) {
  double d = 0.0;
  for (std::size_t k = 0; k <= a.n(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

TEST(ScalarFunctionTest, ParsesBuiltins) {
  EXPECT_EQ(ScalarFunction::parse("zero")(3.0), 0.0);
  EXPECT_EQ(ScalarFunction::parse("const:2.5")(-1.0), 2.5);
  EXPECT_EQ(ScalarFunction::parse("linear:0.5")(4.0), 2.0);
  EXPECT_EQ(ScalarFunction::parse("affine:1,-2")(3.0), -5.0);
  EXPECT_EQ(ScalarFunction::parse("logistic:1")(2.0), -2.0);
  EXPECT_DOUBLE_EQ(ScalarFunction::parse("sine:2,1")(0.5), 2.0 + std::sin(0.5));
  EXPECT_EQ(ScalarFunction::parse("affine:1,-2").spec(), "affine:1,-2");
  EXPECT_EQ(ScalarFunction::linear(0.1).spec(), "linear:0.1");
}

TEST(ScalarFunctionTest, RejectsMalformedSpecs) {
  EXPECT_THROW(ScalarFunction::parse("cubic:1"), ArgumentError);
  EXPECT_THROW(ScalarFunction::parse("const"), ArgumentError);
  EXPECT_THROW(ScalarFunction::parse("const:x"), ArgumentError);
  EXPECT_THROW(ScalarFunction::parse("affine:1"), ArgumentError);
  EXPECT_THROW(ScalarFunction::parse("linear:1,"), ArgumentError);
}

TEST(ModelSpecTest, VerhulstValidation) {
  EXPECT_THROW(ModelSpec::verhulst(1.0, 0.5, 0.0), ArgumentError);
  EXPECT_THROW(ModelSpec::verhulst(1.0, 0.0, 1.0), ArgumentError);
  const auto m = ModelSpec::verhulst(1.0, 0.5, 2.0);
  EXPECT_EQ(m.kind(), models::ModelKind::verhulst);
  EXPECT_EQ(m.drift()(3.0), 3.0 - 9.0);
  EXPECT_EQ(m.diffusion()(3.0), 1.5);
  EXPECT_EQ(m.as_generic().kind(), models::ModelKind::generic);
}

TEST(SimulateEuler, IdentityModelReproducesDriver) {
  const auto driver = fbm::generate_fbm(HurstIndex(0.7), 2048, 1.0, 5);
  const auto model = ModelSpec::generic(ScalarFunction::parse("zero"), ScalarFunction::parse("const:1"), 0.0);
  EXPECT_EQ(models::simulate_euler(model, driver), driver);
}

TEST(SimulateEuler, DeterministicDrift) {
  const auto driver = fbm::generate_fbm(HurstIndex(0.7), 256, 1.0, 5);
  const auto model = ModelSpec::generic(ScalarFunction::parse("const:0.75"), ScalarFunction::parse("zero"), 0.0);
  EXPECT_THROW(models::simulate_euler(model, driver), DegeneracyError);
  const auto x = models::simulate_euler(model, driver, {.check_diffusion = false});
  for (std::size_t k = 0; k <= x.n(); ++k) EXPECT_EQ(x[k], 0.75 * x.time(k)) << k;
}

TEST(SimulateEuler, ZeroDiffusionIsExplicitEulerOde) {
  const auto driver = fbm::generate_fbm(HurstIndex(0.8), 500, 2.0, 1);
  const auto model = ModelSpec::generic(ScalarFunction::parse("logistic:1.3"), ScalarFunction::parse("zero"), 0.2);
  const auto x = models::simulate_euler(model, driver, {.check_diffusion = false});
  double y = 0.2;
  const double h = 2.0 / 500;
  for (std::size_t k = 0; k <= 500; ++k) {
    ASSERT_EQ(x[k], y) << k;
    y = y + (1.3 * y - y * y) * h;
  }
}

TEST(SimulateEuler, ReportsBlowUpIndex) {
  const auto driver = fbm::generate_fbm(HurstIndex(0.7), 1024, 1.0, 3);
  const auto model = ModelSpec::generic(ScalarFunction::parse("logistic:-1"), ScalarFunction::parse("linear:0.1"), -10.0);
  try {
    models::simulate_euler(model, driver);
    FAIL() << "expected blow-up";
  } catch (const SimulationError& e) {
    EXPECT_GT(e.index(), 0u);
    EXPECT_LE(e.index(), 1024u);
  }
}

TEST(SimulateEuler, DiffusionDegeneracyGuard) {
  const auto driver = fbm::generate_fbm(HurstIndex(0.7), 64, 1.0, 3);
  const auto model = ModelSpec::generic(ScalarFunction::parse("zero"), ScalarFunction::parse("linear:1"), 0.0);
  try {
    models::simulate_euler(model, driver);
    FAIL() << "expected degeneracy";
  } catch (const DegeneracyError& e) {
    EXPECT_EQ(e.index(), 0u);
  }
  EXPECT_THROW(models::simulate_euler(ModelSpec::verhulst(1, 0.5, 1), driver), ArgumentError);
}

TEST(VerhulstExact, DeterministicCaseIsLogisticDecay) {
  const SamplePath zero(1.0, std::vector<double>(1001, 0.0));
  const double xi = 2.0;
  const auto x = models::verhulst_exact(0.0, 0.5, xi, zero);
  EXPECT_EQ(x[0], xi);
  for (std::size_t k = 0; k <= 1000; ++k) EXPECT_NEAR(x[k], xi / (1.0 + xi * x.time(k)), 1e-13);
}

TEST(VerhulstExact, PositiveWithBoundedReciprocal) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto driver = fbm::generate_fbm(HurstIndex(0.7), 4096, 1.0, s);
    const auto x = models::verhulst_exact(1.0, 0.5, 1.0, driver);
    EXPECT_EQ(x[0], 1.0);
    double inv_max = 0.0;
    for (double v : x.values()) {
      ASSERT_GT(v, 0.0);
      inv_max = std::max(inv_max, 1.0 / v);
    }
    EXPECT_LT(inv_max, 100.0);
  }
}

TEST(VerhulstExact, RejectsNonPositiveStart) {
  const SamplePath zero(1.0, std::vector<double>(11, 0.0));
  EXPECT_THROW(models::verhulst_exact(1.0, 0.5, 0.0, zero), ArgumentError);
  EXPECT_THROW(models::verhulst_exact(1.0, 0.5, -1.0, zero), ArgumentError);
}

// Trapezoid self-convergence: the model solved on grids m, 2m, 4m restricted
// from one fine driver, compared on the common coarse grid.
TEST(VerhulstExact, TrapezoidSelfConvergence) {
  const double hv = 0.7;
  const std::size_t coarse = 64;
  const std::size_t finest = 1u << 16;
  std::vector<double> log_step, log_gap;
  double d1_total = 0.0, d2_total = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto driver = fbm::generate_fbm(HurstIndex(hv), finest, 1.0, 60 + s);
    const auto reference = models::verhulst_exact(1.0, 0.5, 1.0, driver).restrict_to(finest / coarse);
    std::vector<SamplePath> sols;
    for (std::size_t m : {1024u, 2048u, 4096u}) {
      sols.push_back(models::verhulst_exact(1.0, 0.5, 1.0, driver.restrict_to(finest / m)).restrict_to(m / coarse));
    }
    d1_total += sup_gap(sols[0], sols[1]);
    d2_total += sup_gap(sols[1], sols[2]);
    // Richardson: both refinements approach the fine-grid solution.
    EXPECT_LT(sup_gap(sols[2], reference), sup_gap(sols[0], reference));
  }
  const double observed_order = std::log2(d1_total / d2_total);
  EXPECT_GT(observed_order, 1.0);
}

TEST(SimulateEuler, ConvergesToVerhulstClosedForm) {
  const double hv = 0.75;
  const std::size_t finest = 1u << 18;
  const std::size_t obs = 64;
  std::vector<double> log_step, log_gap;
  for (int e = 10; e <= 16; e += 2) log_step.push_back(-e * std::log(2.0));
  log_gap.assign(log_step.size(), 0.0);
  constexpr int kSeeds = 4;
  for (int s = 0; s < kSeeds; ++s) {
    const auto driver = fbm::generate_fbm(HurstIndex(hv), finest, 1.0, 400 + s);
    const auto exact = models::verhulst_exact(1.0, 0.5, 1.0, driver).restrict_to(finest / obs);
    const auto generic = ModelSpec::verhulst(1.0, 0.5, 1.0).as_generic();
    std::size_t i = 0;
    for (int e = 10; e <= 16; e += 2, ++i) {
      const std::size_t m = 1u << e;
      const auto euler = models::simulate_euler(generic, driver.restrict_to(finest / m)).restrict_to(m / obs);
      log_gap[i] += std::log(sup_gap(euler, exact)) / kSeeds;
    }
  }
  for (std::size_t i = 1; i < log_gap.size(); ++i) EXPECT_LT(log_gap[i], log_gap[i - 1]);
  // Young-regime Euler converges like step^{2H-1}.
  EXPECT_GT(stats::ols_slope(log_step, log_gap), 2 * hv - 1 - 0.1);
}

TEST(NestedObservationsTest, Arithmetic) {
  const auto m = ModelSpec::verhulst(1.0, 0.5, 1.0);
  const auto obs = models::sample_nested(m, HurstIndex(0.7), 50, 2500, 1.0, 9);
  EXPECT_EQ(obs.m_n(), 125000u);
  EXPECT_EQ(obs.values().size(), 125001u);
  const auto coarse = obs.coarse_path();
  EXPECT_EQ(coarse.n(), 50u);
  EXPECT_EQ(coarse, obs.fine_path().restrict_to(2500));
  EXPECT_FALSE(obs.driver().has_value());
}

TEST(NestedObservationsTest, GrowthConditionAndGuards) {
  const auto m = ModelSpec::verhulst(1.0, 0.5, 1.0);
  EXPECT_EQ(models::min_k_n(50), 196u);
  EXPECT_EQ(models::square_schedule(50), 2500u);
  EXPECT_EQ(models::log_schedule(50), 400u);
  EXPECT_THROW(models::sample_nested(m, HurstIndex(0.7), 50, 195, 1.0, 1), ArgumentError);
  EXPECT_NO_THROW(models::sample_nested(m, HurstIndex(0.7), 50, 196, 1.0, 1));
  EXPECT_NO_THROW(models::sample_nested(m, HurstIndex(0.7), 50, 10, 1.0, 1, {.allow_small_k_n = true}));
  EXPECT_THROW(models::sample_nested(m, HurstIndex(0.7), 50, 2500, 1.0, 1, {.max_points = 1000}), ArgumentError);
  EXPECT_THROW(models::NestedObservations(5, 3, 1.0, std::vector<double>(15)), ArgumentError);
}

TEST(NestedObservationsTest, KeepsDriverOnRequest) {
  const auto m = ModelSpec::verhulst(1.0, 0.5, 1.0);
  const auto obs = models::sample_nested(m, HurstIndex(0.7), 10, 100, 1.0, 4, {.keep_driver = true});
  ASSERT_TRUE(obs.driver().has_value());
  EXPECT_EQ(obs.driver()->n(), 1000u);
  EXPECT_EQ(models::verhulst_exact(1.0, 0.5, 1.0, *obs.driver()), obs.fine_path());
}

struct DiagnosticSlopes {
  double increment = 0.0;
  double residual = 0.0;
};

// Increment and (H1) residual maxima on the grids 2^7..2^12 restricted from
// one Verhulst trajectory, regressed on log(1/n).
DiagnosticSlopes verhulst_diagnostics(double hv, int seeds) {
  const HurstIndex h(hv);
  const std::size_t finest = 1u << 14;
  const double sigma = 0.5;
  std::vector<double> log_inv_n, inc_max(6, 0.0), res_max(6, 0.0);
  for (int e = 7; e <= 12; ++e) log_inv_n.push_back(-e * std::log(2.0));
  for (int s = 0; s < seeds; ++s) {
    const auto driver = fbm::generate_fbm(h, finest, 1.0, 3000 + s);
    const auto x = models::verhulst_exact(1.0, sigma, 1.0, driver);
    for (int e = 7; e <= 12; ++e) {
      const std::size_t stride = finest >> e;
      const auto xc = x.restrict_to(stride);
      const auto bc = driver.restrict_to(stride);
      double mi = 0.0, mr = 0.0;
      for (std::size_t k = 1; k <= xc.n(); ++k) mi = std::max(mi, std::abs(xc[k] - xc[k - 1]));
      for (std::size_t k = 2; k <= xc.n(); ++k) {
        mr = std::max(mr, std::abs(xc.second_difference(k) - sigma * xc[k - 1] * bc.second_difference(k)));
      }
      inc_max[e - 7] += std::log(mi) / seeds;
      res_max[e - 7] += std::log(mr) / seeds;
    }
  }
  return {stats::ols_slope(log_inv_n, inc_max), stats::ols_slope(log_inv_n, res_max)};
}

// Maxima over the grid carry a sqrt(ln n) (increments) or ln n (residuals)
// factor, which lowers the slope fitted over 2^7..2^12 by about 1/(2 ln n)
// and 1/ln n respectively.
TEST(HypothesisDiagnostics, VerhulstIncrementAndResidualSlopes) {
  for (double hv : {0.6, 0.8}) {
    const auto slopes = verhulst_diagnostics(hv, 20);
    EXPECT_GE(slopes.increment, hv - 0.15) << hv;
    EXPECT_GE(slopes.residual, 2 * hv - 0.25) << hv;
    EXPECT_GT(slopes.residual - slopes.increment, hv - 0.15) << hv;
  }
}

}  // namespace
}  // namespace hurst_sde
