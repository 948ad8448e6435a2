#include <algorithm>
#include <cmath>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "nbcoll/blowup.hpp"
#include "nbcoll/equilibria.hpp"
#include "nbcoll/errors.hpp"
#include "nbcoll/verify.hpp"

namespace nbcoll {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;

const MassSystem kThree({1.0, 1.0, 1.0});
const MassSystem kFour({1.0, 1.0, 1.0, 1.0});

std::vector<double> sorted_c(const EquilibriumReport& r) {
  std::vector<double> c(r.spectrum.c.data(), r.spectrum.c.data() + r.spectrum.c.size());
  std::sort(c.begin(), c.end());
  return c;
}

// Exact values from a symbolic Hessian of the equal-mass shape potential and metric.
TEST(Equilibria, LagrangeMatchesSymbolicOracle) {
  const EquilibriumReport r = find_central_config(kThree, lagrange_seed());
  EXPECT_LT(r.grad_norm, 1e-10);
  EXPECT_NEAR(r.sigma[0], -2.0 / std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(r.sigma[1], 0.0, 1e-10);
  EXPECT_NEAR(r.V, 3.0, 1e-13);
  EXPECT_NEAR(r.R, -std::sqrt(6.0), 1e-13);
  EXPECT_EQ(r.dimension, 2);
  EXPECT_FALSE(r.chart_boundary);
  EXPECT_LT((r.A - 16.0 / 3.0 * MatX::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((r.B - 27.0 / 32.0 * MatX::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_THAT(sorted_c(r), ElementsAre(DoubleNear(4.5, 1e-6), DoubleNear(4.5, 1e-6)));
  for (const auto& l : r.spectrum.lambda_plus) EXPECT_NEAR(l.real(), 2.8203126522777562, 1e-6);
  for (const auto& l : r.spectrum.lambda_minus) EXPECT_NEAR(l.real(), -1.5955677808861672, 1e-6);
  EXPECT_TRUE(r.spectrum.hyperbolic);
  EXPECT_EQ(r.spectrum.center_dim, 0);
}

TEST(Equilibria, EulerMatchesSymbolicOracle) {
  const EquilibriumReport r = find_central_config(kThree, euler_seed());
  EXPECT_LT(r.grad_norm, 1e-10);
  EXPECT_NEAR(std::abs(r.sigma[1]), 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(r.V, 2.5 * std::sqrt(2.0), 1e-13);
  EXPECT_TRUE(r.chart_boundary);
  EXPECT_THAT(sorted_c(r), ElementsAre(DoubleNear(-3.5 * std::sqrt(2.0), 1e-6), DoubleNear(14.5 * std::sqrt(2.0), 1e-6)));
  // The negative c lies below -R^2/16, giving a complex pair with real part -R/4.
  bool complex_pair = false;
  for (const auto& l : r.spectrum.lambda_plus)
    if (std::abs(l.imag()) > 1e-6) {
      complex_pair = true;
      EXPECT_NEAR(l.real(), 0.66478698711812358, 1e-9);
      EXPECT_NEAR(std::abs(l.imag()), 2.1231593746264646, 1e-6);
    }
  EXPECT_TRUE(complex_pair);
}

TEST(Equilibria, TetrahedronPotentialAndRadialMomentum) {
  const EquilibriumReport r = find_central_config(kFour, configuration_shape(kFour, tetrahedron()));
  EXPECT_LT(r.grad_norm, 1e-10);
  EXPECT_NEAR(r.V, 12.0 * std::sqrt(3.0 / 8.0), 1e-12);
  EXPECT_NEAR(r.R, -std::sqrt(2.0 * r.V), 1e-12);
  EXPECT_EQ(r.dimension, 5);
  EXPECT_GT(r.spectrum.c.minCoeff(), 0.0);
}

TEST(Equilibria, EquilibriumRadialAndDomain) {
  EXPECT_DOUBLE_EQ(equilibrium_radial(2.0), -2.0);
  EXPECT_THROW(equilibrium_radial(0.0), Error);
}

TEST(Equilibria, ReflectionPreservesThePotential) {
  VecX sigma(5);
  sigma << 0.3, -0.4, 0.2, -0.9, 0.35;
  const VecX r = reflect_shape(sigma, 3);
  EXPECT_NEAR(potential_V(kFour, r), potential_V(kFour, sigma), 1e-14);
  EXPECT_EQ(reflect_shape(r, 3), sigma);
}

TEST(Equilibria, LinearizationIsSymmetricAndMatchesDirectionalDifferences) {
  const EquilibriumReport r = find_central_config(kFour, configuration_shape(kFour, tetrahedron()));
  EXPECT_LT(r.b_asymmetry, 1e-8);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<MatX>(r.A).eigenvalues().minCoeff(), 0.0);
  VecX d(5);
  d << 0.3, -0.1, 0.7, 0.2, -0.5;
  d.normalize();
  const double h = 1e-3;
  const double second = (potential_V(kFour, r.sigma + h * d) - 2 * potential_V(kFour, r.sigma) +
                         potential_V(kFour, r.sigma - h * d)) /
                        (h * h);
  EXPECT_NEAR(second, d.dot(r.B * d), 1e-5);
}

TEST(Equilibria, ModeEigenvaluesSpecialCases) {
  const double R = -2.0;
  const auto [zp, zm] = mode_eigenvalues(R, 0.0);
  EXPECT_EQ(zp, Complex(1.0, 0.0));
  EXPECT_EQ(zm, Complex(0.0, 0.0));
  const auto [cp, cm] = mode_eigenvalues(R, -1.0);
  EXPECT_DOUBLE_EQ(cp.real(), 0.5);
  EXPECT_DOUBLE_EQ(cm.real(), 0.5);
  EXPECT_GT(std::abs(cp.imag()), 0.0);
  // lambda solves lambda^2 + (R/2) lambda - c = 0.
  const auto [rp, rm] = mode_eigenvalues(R, 3.0);
  for (Complex l : {rp, rm}) EXPECT_NEAR(std::abs(l * l + R / 2 * l - 3.0), 0.0, 1e-14);
}

TEST(Equilibria, ClassifyMatchesBlockEigenvalues) {
  const EquilibriumReport r = find_central_config(kFour, configuration_shape(kFour, tetrahedron()));
  std::vector<Complex> formula;
  for (Eigen::Index j = 0; j < r.spectrum.c.size(); ++j) {
    const auto [p, m] = mode_eigenvalues(r.R, r.spectrum.c[j]);
    formula.push_back(p);
    formula.push_back(m);
  }
  EXPECT_LT(match_eigenvalues(formula, block_eigenvalues(r.R, r.A, r.B)), 1e-9);
}

TEST(Equilibria, ClassifyCountsKernelDirections) {
  MatX A = MatX::Identity(3, 3), B = MatX::Zero(3, 3);
  B(0, 0) = 2.0;
  B(1, 1) = -0.5;
  const Spectrum s = classify(-2.0, A, B);
  EXPECT_EQ(s.center_dim, 1);
  EXPECT_FALSE(s.hyperbolic);
}

// Block system in (rho, R, S, sigma) linearized at an equilibrium.
MatX block_matrix(double R, const MatX& A, const MatX& B) {
  const Eigen::Index d = A.rows();
  MatX m = MatX::Zero(2 + 2 * d, 2 + 2 * d);
  m(0, 0) = R;
  m(1, 1) = R;
  m.block(2, 2, d, d) = -R / 2 * MatX::Identity(d, d);
  m.block(2, 2 + d, d, d) = B;
  m.block(2 + d, 2, d, d) = A;
  return m;
}

void expect_flow_matches_exponential(const EquilibriumReport& eq) {
  const Eigen::Index d = eq.A.rows();
  Displacement d0;
  d0.rho = 0.3;
  d0.R = -0.2;
  d0.S = VecX::LinSpaced(d, 0.1, -0.2);
  d0.sigma = VecX::LinSpaced(d, -0.3, 0.4);
  VecX z0(2 + 2 * d);
  z0 << d0.rho, d0.R, d0.S, d0.sigma;
  for (double tau : {0.5, 1.7}) {
    const MatX e = (tau * block_matrix(eq.R, eq.A, eq.B)).exp();
    const VecX z = e * z0;
    const Displacement dt = linearized_flow(eq, d0, tau);
    VecX got(2 + 2 * d);
    got << dt.rho, dt.R, dt.S, dt.sigma;
    EXPECT_LT((got - z).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, z.cwiseAbs().maxCoeff())) << tau;
  }
}

TEST(Equilibria, LinearizedFlowIsTheMatrixExponential) {
  expect_flow_matches_exponential(find_central_config(kThree, lagrange_seed()));
  expect_flow_matches_exponential(find_central_config(kThree, euler_seed()));
}

TEST(Equilibria, ResonantModeProducesPolynomialFactor) {
  // R^2 + 16 c = 0: repeated eigenvalue -R/4 with a tau exp(lambda tau) term.
  EquilibriumReport eq;
  eq.R = -2.0;
  eq.A = MatX::Identity(2, 2);
  eq.B = (MatX(2, 2) << -0.25, 0.0, 0.0, 1.0).finished();
  eq.spectrum = classify(eq.R, eq.A, eq.B);
  expect_flow_matches_exponential(eq);
}

double nonlinear_gap(const EquilibriumReport& eq, const Displacement& d, double tau) {
  BlowupState bs;
  bs.rho = d.rho;
  bs.R = eq.R + d.R;
  bs.S = d.S;
  bs.sigma = eq.sigma + d.sigma;
  bs.u = 0.3;
  bs.v = 0.2;
  BlowupOptions bo;
  bo.rtol = 1e-13;
  bo.atol = 1e-15;
  const BlowupState end = integrate_blowup(kThree, bs, 0.0, tau, bo).states.back();
  const Displacement lin = linearized_flow(eq, d, tau);
  double gap = std::abs(end.rho - lin.rho) + std::abs(end.R - eq.R - lin.R);
  gap += (end.S - lin.S).cwiseAbs().maxCoeff() + (end.sigma - eq.sigma - lin.sigma).cwiseAbs().maxCoeff();
  return gap;
}

TEST(Equilibria, LinearizedFlowIsFirstOrderAccurate) {
  const EquilibriumReport eq = find_central_config(kThree, lagrange_seed());
  Displacement d;
  d.rho = 0.0;
  d.R = 0.4;
  d.S = Eigen::Vector2d(0.3, -0.5);
  d.sigma = Eigen::Vector2d(-0.2, 0.6);
  const double tau = 0.4;
  auto scaled = [&](double e) {
    Displacement x = d;
    x.R *= e;
    x.S *= e;
    x.sigma *= e;
    return x;
  };
  const double g1 = nonlinear_gap(eq, scaled(1e-3), tau);
  const double g2 = nonlinear_gap(eq, scaled(5e-4), tau);
  EXPECT_LT(g1, 1e-4);
  EXPECT_NEAR(g1 / g2, 4.0, 0.4);
}

TEST(Equilibria, RestrictedFlowVanishesAtTheEquilibrium) {
  const EquilibriumReport eq = find_central_config(kThree, lagrange_seed());
  const RestrictedRates r = restricted_center_flow(kThree, eq, VecX::Zero(2), VecX::Zero(2));
  EXPECT_LT(r.w.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(r.s.cwiseAbs().maxCoeff(), 0.0);
  const BlowupState bs = restricted_to_blowup(kThree, eq, VecX::Zero(2), VecX::Zero(2));
  EXPECT_NEAR(bs.R, eq.R, 1e-13);
}

TEST(Equilibria, SurveyFindsBothClassicalFamilies) {
  SurveyOptions opt;
  opt.seed = 3;
  const auto found = survey(kThree, opt);
  bool equilateral = false, collinear = false;
  for (const auto& r : found) {
    EXPECT_LT(r.grad_norm, 1e-10);
    if (std::abs(r.V - 3.0) < 1e-9) equilateral = true;
    if (std::abs(r.V - 2.5 * std::sqrt(2.0)) < 1e-9) collinear = true;
  }
  EXPECT_TRUE(equilateral);
  EXPECT_TRUE(collinear);
}

TEST(Equilibria, NewtonReportsNonConvergence) {
  NewtonOptions opt;
  opt.max_iter = 1;
  try {
    find_central_config(kThree, Eigen::Vector2d(-0.3, 1.5), opt);
    FAIL() << "expected NoConvergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoConvergence);
  }
}

}  // namespace
}  // namespace nbcoll
