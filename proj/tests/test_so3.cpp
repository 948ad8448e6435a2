#include <cmath>

#include <gtest/gtest.h>

#include "nbcoll/errors.hpp"
#include "nbcoll/so3.hpp"
#include "support.hpp"

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

TEST(So3, MovingFrameIsRightHandedOrthonormal) {
  const Frame f = moving_frame(Vec3(1, 2, 0.5), Vec3(0.3, -0.2, 1.1));
  const Mat3 m = f.matrix();
  EXPECT_LT((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(m.determinant(), 1.0, 1e-15);
  EXPECT_LT((f.f3 - Vec3(0.3, -0.2, 1.1).normalized()).norm(), 1e-15);
}

TEST(So3, FrameOfAxisAlignedVectors) {
  // f3 = x_n/|x_n|, f1 along x_n x x_{n-1}.
  const Frame f = moving_frame(Vec3(0, 1, 0), Vec3(0, 0, 2));
  EXPECT_LT((f.f3 - Vec3(0, 0, 1)).norm(), 1e-15);
  EXPECT_LT((f.f1 - Vec3(-1, 0, 0)).norm(), 1e-15);
  EXPECT_LT((f.f2 - Vec3(0, -1, 0)).norm(), 1e-15);
}

TEST(So3, EulerAnglesRoundTrip) {
  const EulerTriple t{0.7, 1.1, -2.3};
  const EulerTriple back = euler_angles(rotation_from_euler(t));
  EXPECT_NEAR(back.phi, t.phi, 1e-14);
  EXPECT_NEAR(back.theta, t.theta, 1e-14);
  EXPECT_NEAR(back.psi, t.psi, 1e-14);
  const Vec3 f3 = rotation_from_euler(t).col(2);
  EXPECT_LT((node_vector(t) - Vec3::UnitZ().cross(f3).normalized()).norm(), 1e-15);
}

TEST(So3, RotationFromEulerIsZxzComposition) {
  const EulerTriple t{0.3, 0.9, 1.4};
  const Mat3 expected = (Eigen::AngleAxisd(t.phi, Vec3::UnitZ()) * Eigen::AngleAxisd(t.theta, Vec3::UnitX()) *
                         Eigen::AngleAxisd(t.psi, Vec3::UnitZ()))
                            .toRotationMatrix();
  EXPECT_LT((rotation_from_euler(t) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(So3, ReduceReconstructRoundTrip) {
  std::mt19937_64 rng(21);
  for (int n : {2, 3, 4}) {
    std::vector<double> m(n + 1, 1.0);
    const MassSystem ms(m);
    Vec3List x, y;
    for (int i = 0; i < n; ++i) {
      x.push_back(testing::random_vec(rng));
      y.push_back(testing::random_vec(rng));
    }
    const ReducedState rs = reduce(ms, y, x);
    const RelativePairs back = reconstruct(ms, rs);
    for (int i = 0; i < n; ++i) {
      EXPECT_LT((back.x[i] - x[i]).norm(), 1e-12) << n;
      EXPECT_LT((back.y[i] - y[i]).norm(), 1e-12) << n;
    }
    // Body-frame layout: xi_{n,3} > 0 and xi_{n-1,2} < 0.
    EXPECT_GT(rs.xi[frame_dim(n) - 1], 0.0);
    EXPECT_LT(rs.xi[3 * (n - 2)], 0.0);
    EXPECT_NEAR(hamiltonian_so3(ms, rs), hamiltonian_jacobi(ms, y, x), 1e-11);
  }
}

TEST(So3, AngularMomentumComponentsReassemble) {
  std::mt19937_64 rng(22);
  const MassSystem ms({1.0, 2.0, 3.0});
  Vec3List x = {testing::random_vec(rng), testing::random_vec(rng)};
  Vec3List y = {testing::random_vec(rng), testing::random_vec(rng)};
  const ReducedState rs = reduce(ms, y, x);
  const Vec3 c = x[0].cross(y[0]) + x[1].cross(y[1]);
  EXPECT_LT((angular_momentum_from_components(rs.Phi, rs.Theta, rs.Psi, rs.angles) - c).norm(), 1e-12);
}

TEST(So3, DegenerateFramesRaiseTypedErrors) {
  EXPECT_EQ(kind_of([] { moving_frame(Vec3(1, 0, 0), Vec3(2, 0, 0)); }), ErrorKind::FrameDegenerate);
  EXPECT_EQ(kind_of([] { moving_frame(Vec3(1, 0, 0), Vec3::Zero()); }), ErrorKind::FrameDegenerate);
  EXPECT_EQ(kind_of([] { euler_angles(Mat3::Identity()); }), ErrorKind::GimbalDegenerate);
}

}  // namespace
}  // namespace nbcoll
