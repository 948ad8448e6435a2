#include <cmath>

#include <gtest/gtest.h>

#include "nbcoll/blowup.hpp"
#include "nbcoll/equilibria.hpp"
#include "nbcoll/errors.hpp"
#include "nbcoll/spin_lab.hpp"
#include "nbcoll/verify.hpp"

namespace nbcoll {
namespace {

const MassSystem kThree({1.0, 1.0, 1.0});
const MassSystem kFour({1.0, 0.8, 1.3, 1.1});

BlowupState generic_state(double rho) {
  BlowupState bs;
  bs.rho = rho;
  bs.R = -0.4;
  bs.S = (VecX(5) << 0.1, 0.2, -0.15, 0.05, 0.1).finished();
  bs.sigma = (VecX(5) << 0.3, -0.4, 0.2, -0.9, 0.35).finished();
  bs.u = 0.3;
  bs.v = -0.2;
  bs.alpha = 0.4;
  return bs;
}

double relative_drift(const Trajectory& tr) {
  const double e0 = tr.diag.front().E, l0 = tr.diag.front().L;
  double worst = 0.0;
  for (const auto& nd : tr.diag) worst = std::max(worst, std::abs(nd.E - e0 * std::exp(nd.L - l0)) / std::abs(e0));
  return worst;
}

TEST(Blowup, RescalingExample) {
  ShapeState ss;
  ss.rho = 4.0;
  ss.R = -1.0;
  ss.S = Eigen::Vector2d(0.5, -1.0);
  ss.sigma = Eigen::Vector2d(-1.0, 0.2);
  const BlowupState bs = blow_up(ss);
  EXPECT_DOUBLE_EQ(bs.R, -2.0);
  EXPECT_DOUBLE_EQ(bs.S[0], 0.25);
  const ShapeState back = blow_down(bs);
  EXPECT_DOUBLE_EQ(back.R, -1.0);
  EXPECT_DOUBLE_EQ(back.S[1], -1.0);
  // Unit radius leaves the momenta unchanged.
  ss.rho = 1.0;
  EXPECT_DOUBLE_EQ(blow_up(ss).R, ss.R);
  EXPECT_THROW(blow_down(BlowupState{}), Error);
}

TEST(Blowup, KineticAndPotentialBasics) {
  EXPECT_EQ(kinetic_T(kThree, VecX::Zero(2), Eigen::Vector2d(-1.0, 0.3)), 0.0);
  const double v_eq = potential_V(kThree, Eigen::Vector2d(-2.0 / std::sqrt(3.0), 0.0));
  const double v_col = potential_V(kThree, Eigen::Vector2d(0.0, 2.0 / 3.0));
  EXPECT_GT(v_col, v_eq);
  EXPECT_GT(potential_V(kFour, generic_state(1.0).sigma), 0.0);
}

TEST(Blowup, KineticGradientModesAgree) {
  const BlowupState bs = generic_state(1.0);
  const VecX fd = kinetic_gradient_fd(kFour, bs.S, bs.sigma, 1e-3);
  const VecX ad = kinetic_gradient_ad(kFour, bs.S, bs.sigma);
  EXPECT_LT((fd - ad).cwiseAbs().maxCoeff(), 1e-9);
  FieldOptions fo;
  fo.mode = GradientMode::CrossCheck;
  EXPECT_LT((kinetic_gradient(kFour, bs.S, bs.sigma, {}, fo) - ad).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Blowup, FieldStructure) {
  BlowupState bs = generic_state(0.0);
  const BlowupState d = blowup_field(kFour, bs);
  EXPECT_EQ(d.rho, 0.0);
  bs.S.setZero();
  const BlowupState still = blowup_field(kFour, bs);
  EXPECT_EQ(still.sigma.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(still.u, 0.0);
  EXPECT_EQ(still.v, 0.0);
  EXPECT_EQ(still.alpha, 0.0);
}

TEST(Blowup, FieldVanishesAtLagrangeEquilibrium) {
  BlowupState bs;
  bs.rho = 0.0;
  bs.S = VecX::Zero(2);
  bs.sigma = Eigen::Vector2d(-2.0 / std::sqrt(3.0), 0.0);
  bs.R = equilibrium_radial(3.0);
  bs.u = 0.3;
  bs.v = 0.2;
  EXPECT_LT(field_norm(blowup_field(kThree, bs)), 1e-12);
  EXPECT_NEAR(rescaled_energy(kThree, bs), 0.0, 1e-14);
}

TEST(Blowup, PackRoundTrip) {
  BlowupState bs = generic_state(0.7);
  bs.chart = -1;
  const VecX y = pack_blowup(bs, 0.25);
  EXPECT_EQ(y.size(), 2 * 5 + 7);
  const BlowupState back = unpack_blowup(y, kFour.n());
  EXPECT_EQ(back.chart, -1);
  EXPECT_EQ(back.rho, bs.rho);
  EXPECT_EQ((back.S - bs.S).norm(), 0.0);
  EXPECT_EQ(y[y.size() - 1], 0.25);
}

TEST(Blowup, EnergyRelationAlongFlow) {
  BlowupOptions bo;
  bo.rtol = bo.atol = 1e-11;
  bo.field.mode = GradientMode::AutoDiff;
  const Trajectory tr = integrate_blowup(kFour, generic_state(0.8), 0.0, 1.5, bo);
  EXPECT_DOUBLE_EQ(tr.tau.back(), 1.5);
  EXPECT_LT(relative_drift(tr), 1e-8);
}

TEST(Blowup, EnergyResidualVanishesAtThePhysicalEnergy) {
  const BlowupState bs = generic_state(0.8);
  const double h = hamiltonian_shape(kFour, blow_down(bs));
  EXPECT_NEAR(energy_residual(kFour, bs, h), 0.0, 1e-13);
  EXPECT_GT(std::abs(energy_residual(kFour, bs, h + 0.1)), 0.01);
}

TEST(Blowup, CollisionManifoldIsInvariant) {
  const Trajectory tr = integrate_blowup(kFour, generic_state(0.0), 0.0, 1.5);
  for (const auto& s : tr.states) EXPECT_EQ(s.rho, 0.0);
}

TEST(Blowup, HomotheticSolutionIsExact) {
  const EquilibriumReport eq = find_central_config(kThree, lagrange_seed());
  BlowupOptions bo;
  bo.rtol = 1e-12;
  bo.atol = 1e-18;
  const BlowupState s0 = seed_homothetic(eq, 2.0, {0.3, 0.2, 0.1, +1});
  const Trajectory tr = integrate_blowup(kThree, s0, 0.0, 2.0, bo);
  for (std::size_t k = 0; k < tr.tau.size(); ++k) {
    EXPECT_LT((tr.states[k].sigma - eq.sigma).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(tr.states[k].rho, 2.0 * std::exp(eq.R * tr.tau[k]), 1e-9 * tr.states[k].rho);
  }
}

TEST(Blowup, BackwardIntegrationReturnsIncreasingNodes) {
  const Trajectory tr = integrate_blowup(kFour, generic_state(0.5), 1.0, 0.0);
  ASSERT_GE(tr.tau.size(), 2u);
  EXPECT_DOUBLE_EQ(tr.tau.front(), 0.0);
  EXPECT_DOUBLE_EQ(tr.tau.back(), 1.0);
  for (std::size_t k = 1; k < tr.tau.size(); ++k) EXPECT_LT(tr.tau[k - 1], tr.tau[k]);
}

TEST(Blowup, PhysicalTimeOfHomotheticRay) {
  // t(tau) = int rho^{3/2} = rho0^{3/2} (exp(3 R tau / 2) - 1) / (3 R / 2).
  const EquilibriumReport eq = find_central_config(kThree, lagrange_seed());
  BlowupOptions bo;
  bo.rtol = 1e-12;
  bo.atol = 1e-18;
  const Trajectory tr = integrate_blowup(kThree, seed_homothetic(eq, 1.0), 0.0, 2.0, bo);
  const double k = 1.5 * eq.R;
  EXPECT_NEAR(tr.physical_time().back(), (std::exp(k * 2.0) - 1.0) / k, 1e-9);
}

}  // namespace
}  // namespace nbcoll
