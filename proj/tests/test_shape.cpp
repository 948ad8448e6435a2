#include <cmath>

#include <gtest/gtest.h>

#include "nbcoll/blowup.hpp"
#include "nbcoll/errors.hpp"
#include "nbcoll/jacobi.hpp"
#include "nbcoll/pipeline.hpp"
#include "nbcoll/shape.hpp"
#include "nbcoll/verify.hpp"
#include "support.hpp"

namespace nbcoll {
namespace {

TEST(Shape, SplitMergeRoundTrip) {
  std::mt19937_64 rng(31);
  for (int n : {2, 3}) {
    const MassSystem ms(std::vector<double>(n + 1, 1.0));
    const int f = frame_dim(n);
    VecX xi(f), eta(f);
    for (int i = 0; i < f; ++i) {
      xi[i] = testing::random_vec(rng)[0];
      eta[i] = testing::random_vec(rng)[0];
    }
    xi[f - 1] = 0.8;
    const ShapeState ss = shape_split(ms, eta, xi);
    EXPECT_NEAR(ss.rho, mu_norm(ms, xi), 1e-15);
    EXPECT_EQ(ss.sigma.size(), shape_dim(n));
    const FramePair back = shape_merge(ms, ss);
    EXPECT_LT((back.xi - xi).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((back.eta - eta).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Shape, PotentialAtClassicalConfigurations) {
  const MassSystem three({1.0, 1.0, 1.0});
  Eigen::Vector2d lagrange(-2.0 / std::sqrt(3.0), 0.0), euler(0.0, 2.0 / 3.0);
  EXPECT_NEAR(shape_potential(three, lagrange), 3.0, 1e-14);
  EXPECT_NEAR(shape_potential(three, euler), 2.5 * std::sqrt(2.0), 1e-14);
  // Regular tetrahedron, unit masses: 6/edge times the mass radius = 12 sqrt(3/8).
  const MassSystem four({1.0, 1.0, 1.0, 1.0});
  EXPECT_NEAR(shape_potential(four, configuration_shape(four, tetrahedron())), 12.0 * std::sqrt(3.0 / 8.0), 1e-13);
}

TEST(Shape, PotentialIsTheNormalizedConfigurationPotential) {
  std::mt19937_64 rng(32);
  const MassSystem ms({1.0, 0.5, 2.0, 1.5});
  const CartesianState s = testing::random_state(rng, 4);
  const VecX sigma = configuration_shape(ms, s.q);
  EXPECT_NEAR(shape_potential(ms, sigma), -potential_cartesian(ms, normalized_configuration(ms, s.q)), 1e-12);
}

TEST(Shape, AnalyticGradientMatchesDifferences) {
  const MassSystem ms({1.0, 0.5, 2.0, 1.5});
  VecX sigma(5);
  sigma << 0.3, -0.4, 0.2, -0.9, 0.35;
  const VecX g = shape_potential_gradient(ms, sigma);
  const VecX fd = potential_gradient_fd(ms, sigma, 1e-4);
  EXPECT_LT((g - fd).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Shape, MetricReproducesKineticEnergy) {
  const MassSystem ms({1.0, 1.0, 1.0, 1.0});
  VecX sigma(5), S(5);
  sigma << 0.3, -0.4, 0.2, -0.9, 0.35;
  S << 0.1, 0.7, -0.3, 0.2, -0.5;
  const MatX A = shape_metric(ms, sigma);
  EXPECT_LT((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(0.5 * S.dot(A * S), shape_kinetic(ms, S, sigma), 1e-13);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<MatX>(A).eigenvalues().minCoeff(), 0.0);
}

TEST(Shape, EqualMassLagrangeMetricIsIsotropic) {
  // Exact symbolic value 16/3 times the identity.
  const MatX A = shape_metric(MassSystem({1.0, 1.0, 1.0}), Eigen::Vector2d(-2.0 / std::sqrt(3.0), 0.0));
  EXPECT_LT((A - 16.0 / 3.0 * MatX::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Shape, HamiltonianMatchesCartesianAtZeroAngularMomentum) {
  std::mt19937_64 rng(33);
  const MassSystem ms({1.0, 2.0, 0.7});
  const CartesianState s = testing::zero_momentum(ms, testing::random_state(rng, 3));
  const ChartDump d = chart_dump(ms, s);
  EXPECT_NEAR(d.H_shape, d.H_cartesian, 1e-12 * std::max(1.0, std::abs(d.H_cartesian)));
  EXPECT_LT(d.max_residual(), 1e-10);
}

TEST(Shape, CollisionShapeRaises) {
  const MassSystem ms({1.0, 1.0, 1.0});
  try {
    shape_potential(ms, Eigen::Vector2d(0.0, 0.0));
    FAIL() << "expected SingularConfiguration";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularConfiguration);
  }
}

}  // namespace
}  // namespace nbcoll
