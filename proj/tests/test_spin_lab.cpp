#include <cmath>

#include <gtest/gtest.h>

#include "nbcoll/errors.hpp"
#include "nbcoll/spin_lab.hpp"
#include "nbcoll/verify.hpp"

namespace nbcoll {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

const MassSystem kThree({1.0, 1.0, 1.0});

ExperimentConfig stable_seed_config() {
  ExperimentConfig cfg;
  cfg.masses = {1.0, 1.0, 1.0};
  cfg.recipe = Recipe::StableSeed;
  cfg.sigma_guess = lagrange_seed();
  cfg.eps = 1e-3;
  cfg.tau_max = 13.0;
  cfg.eq_threshold = 1.2e-3;
  return cfg;
}

TEST(SpinLab, RecipeNamesRoundTrip) {
  for (Recipe r : {Recipe::Homothetic, Recipe::StableSeed, Recipe::UserState}) EXPECT_EQ(parse_recipe(to_string(r)), r);
  EXPECT_EQ(kind_of([] { parse_recipe("spiral"); }), ErrorKind::InvalidArgument);
}

TEST(SpinLab, ValidationRejectsBadConfigurations) {
  ExperimentConfig cfg = stable_seed_config();
  EXPECT_NO_THROW(cfg.validate());
  cfg.tau_max = 0.0;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::InvalidArgument);
  cfg = stable_seed_config();
  cfg.sigma_guess = VecX::Zero(5);
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::InvalidArgument);
  cfg = stable_seed_config();
  cfg.w0.chart = 0;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::InvalidArgument);
  cfg = stable_seed_config();
  cfg.rtol = -1.0;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::InvalidArgument);
}

TEST(SpinLab, HomotheticSeedSitsOnTheRay) {
  const EquilibriumReport eq = find_central_config(kThree, lagrange_seed());
  const BlowupState bs = seed_homothetic(eq, 2.5, {0.1, -0.2, 0.7, -1});
  EXPECT_EQ(bs.rho, 2.5);
  EXPECT_EQ(bs.R, eq.R);
  EXPECT_EQ(bs.S.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(bs.sigma, eq.sigma);
  EXPECT_EQ(bs.chart, -1);
  EXPECT_EQ(kind_of([&] { seed_homothetic(eq, 0.0); }), ErrorKind::InvalidArgument);
}

TEST(SpinLab, SlowestStableModeAtLagrange) {
  const EquilibriumReport eq = find_central_config(kThree, lagrange_seed());
  const int j = slowest_stable_mode(eq);
  EXPECT_NEAR(eq.spectrum.lambda_minus[j].real(), -1.5955677808861672, 1e-6);
  EquilibriumReport none = eq;
  for (auto& l : none.spectrum.lambda_minus) l = Complex(0.5, 0.0);
  EXPECT_EQ(kind_of([&] { slowest_stable_mode(none); }), ErrorKind::NoStableMode);
}

TEST(SpinLab, StableSeedLiesOnZeroEnergyCollisionManifold) {
  const EquilibriumReport eq = find_central_config(kThree, lagrange_seed());
  const BlowupState bs = seed_stable_direction(kThree, eq, 1e-3, -1);
  EXPECT_EQ(bs.rho, 0.0);
  EXPECT_NEAR(rescaled_energy(kThree, bs), 0.0, 1e-13);
  const double dist = std::hypot((bs.sigma - eq.sigma).norm(), bs.S.norm());
  EXPECT_GT(dist, 1e-4);
  EXPECT_LT(dist, 1e-2);
}

TEST(SpinLab, StableSeedExperimentConverges) {
  const Experiment ex = run_experiment(stable_seed_config());
  const SpinReport& r = ex.report;
  ASSERT_GE(r.dyadic.size(), 2u);
  // Windows double in length, so early ratios may exceed one; the tail must contract.
  ASSERT_GE(r.ratios.size(), 3u);
  for (std::size_t k = r.ratios.size() - 3; k < r.ratios.size(); ++k) EXPECT_LT(r.ratios[k], 1.0);
  EXPECT_LT(r.ratios.back(), 0.1);
  EXPECT_LT(r.tail_bound, 1e-6);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.cauchy_tail, r.tail_bound);
  EXPECT_LT(r.rho_check, 1e-300);
  EXPECT_LT(r.energy_check, 1e-9);
  EXPECT_LE(r.bound_ratio, 1.0 + 1e-6);
  EXPECT_NEAR(r.descent.rate, r.descent.expected_rate, 0.3 * r.descent.expected_rate);
  // Running suprema are non-decreasing.
  for (std::size_t k = 1; k < ex.running_inv_sigma2.size(); ++k)
    EXPECT_GE(ex.running_inv_sigma2[k], ex.running_inv_sigma2[k - 1]);
}

TEST(SpinLab, ExperimentIsDeterministic) {
  const SpinReport a = run_experiment(stable_seed_config()).report;
  const SpinReport b = run_experiment(stable_seed_config()).report;
  EXPECT_EQ(a.dyadic, b.dyadic);
  EXPECT_EQ(a.w_limit, b.w_limit);
}

TEST(SpinLab, ThresholdNeverReachedIsInsufficientTail) {
  ExperimentConfig cfg = stable_seed_config();
  cfg.tau_max = 0.5;
  cfg.eq_threshold = 1e-12;
  EXPECT_EQ(kind_of([&] { run_experiment(cfg); }), ErrorKind::InsufficientTail);
}

}  // namespace
}  // namespace nbcoll
