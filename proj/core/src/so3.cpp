#include "nbcoll/so3.hpp"

#include <cmath>

#include "nbcoll/errors.hpp"

namespace nbcoll {
namespace {

Mat3 rot3(double a) {
  Mat3 r;
  r << std::cos(a), -std::sin(a), 0.0, std::sin(a), std::cos(a), 0.0, 0.0, 0.0, 1.0;
  return r;
}

Mat3 rot1(double a) {
  Mat3 r;
  r << 1.0, 0.0, 0.0, 0.0, std::cos(a), -std::sin(a), 0.0, std::sin(a), std::cos(a);
  return r;
}

void check_reduced(const ReducedState& rs, int n, const Floors& floors) {
  if (rs.xi.size() != frame_dim(n) || rs.eta.size() != frame_dim(n))
    fail(ErrorKind::InvalidArgument, "reduced state has wrong size");
  const int k = 3 * (n - 2);
  if (!(rs.xi[k + 2] > floors.xi_n3)) fail(ErrorKind::DivisionDegenerate, "xi_{n,3} below floor");
  if (!(rs.xi[k] < -floors.xi_n12)) fail(ErrorKind::DivisionDegenerate, "xi_{n-1,2} not below -floor");
}

}  // namespace

Mat3 Frame::matrix() const {
  Mat3 m;
  m.col(0) = f1;
  m.col(1) = f2;
  m.col(2) = f3;
  return m;
}

Frame moving_frame(const Vec3& x_nm1, const Vec3& x_n, const Floors& floors) {
  const double r = x_n.norm();
  if (r < floors.frame) fail(ErrorKind::FrameDegenerate, "x_n vanishes");
  const Vec3 c = x_n.cross(x_nm1);
  const double cn = c.norm();
  if (cn < floors.frame) fail(ErrorKind::FrameDegenerate, "x_{n-1} parallel to x_n");
  Frame f;
  f.f3 = x_n / r;
  f.f1 = c / cn;
  f.f2 = f.f3.cross(f.f1);
  return f;
}

EulerTriple euler_angles(const Mat3& f, const Floors& floors) {
  // Third column (sin phi sin theta, -cos phi sin theta, cos theta);
  // third row (sin theta sin psi, sin theta cos psi, cos theta).
  const double s = std::hypot(f(0, 2), f(1, 2));
  if (s < floors.sin_theta) fail(ErrorKind::GimbalDegenerate, "f3 parallel to e3");
  EulerTriple t;
  t.theta = std::atan2(s, f(2, 2));
  t.phi = std::atan2(f(0, 2), -f(1, 2));
  t.psi = std::atan2(f(2, 0), f(2, 1));
  return t;
}

Mat3 rotation_from_euler(const EulerTriple& t) { return rot3(t.phi) * rot1(t.theta) * rot3(t.psi); }

Vec3 node_vector(const EulerTriple& t) { return Vec3(std::cos(t.phi), std::sin(t.phi), 0.0); }

Vec3 psi_vector(const Vec3List& a, const Vec3List& b, int p) {
  Vec3 s = Vec3::Zero();
  for (int j = 0; j < p; ++j) s += a[j].cross(b[j]);
  return s;
}

double psi_partial(const Vec3List& eta, const Vec3List& xi, int k, int p) {
  if (k < 1 || k > 3) fail(ErrorKind::InvalidArgument, "component index must be 1, 2 or 3");
  if (p < 0 || p > static_cast<int>(xi.size())) fail(ErrorKind::InvalidArgument, "partial sum index out of range");
  return psi_vector(xi, eta, p)[k - 1];
}

Vec3 missing_zeta(double Phi, double Theta, double Psi, const EulerTriple& a, const Vec3List& eta,
                  const Vec3List& xi, const Floors& floors) {
  const int n = static_cast<int>(xi.size());
  const double x2 = xi[n - 2][1], x3 = xi[n - 2][2], r = xi[n - 1][2];
  if (std::abs(x2) < floors.xi_n12) fail(ErrorKind::DivisionDegenerate, "xi_{n-1,2} below floor");
  if (r < floors.xi_n3) fail(ErrorKind::DivisionDegenerate, "xi_{n,3} below floor");
  const Vec3 lo = psi_vector(xi, eta, n - 2);
  const Vec3 hi = psi_vector(xi, eta, n - 1);
  double cf1 = 0.0, cf2 = 0.0;  // C.f1 and C.f2
  if (Phi != 0.0 || Theta != 0.0 || Psi != 0.0) {
    const double st = std::sin(a.theta);
    if (std::abs(st) < floors.sin_theta) fail(ErrorKind::GimbalDegenerate, "sin(theta) below floor");
    const double g = (Phi - Psi * std::cos(a.theta)) / st;
    cf1 = Theta * std::cos(a.psi) + g * std::sin(a.psi);
    cf2 = -Theta * std::sin(a.psi) + g * std::cos(a.psi);
  }
  const double z_nm1 = -(Psi - lo[2]) / x2;
  const double z_n1 = (cf2 - lo[1] + x3 / x2 * (Psi - lo[2])) / r;
  const double z_n2 = (-cf1 + hi[0]) / r;
  return Vec3(z_nm1, z_n1, z_n2);
}

ReducedState reduce(const MassSystem& ms, const Vec3List& y, const Vec3List& x, const Floors& floors) {
  const int n = ms.n();
  if (n < 2) fail(ErrorKind::InvalidArgument, "rotation reduction needs at least three bodies");
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    fail(ErrorKind::InvalidArgument, "relative pairs have wrong size");
  const Frame f = moving_frame(x[n - 2], x[n - 1], floors);
  const Mat3 rot = f.matrix();
  ReducedState rs;
  rs.angles = euler_angles(rot, floors);
  Vec3List xi(n), zeta(n);
  for (int j = 0; j < n; ++j) {
    xi[j] = rot.transpose() * x[j];
    zeta[j] = rot.transpose() * y[j];
  }
  xi[n - 2][0] = 0.0;
  xi[n - 1][0] = 0.0;
  xi[n - 1][1] = 0.0;
  rs.xi = pack_frame(xi);
  rs.eta = pack_frame(zeta);
  Vec3 c = Vec3::Zero();
  for (int j = 0; j < n; ++j) c += x[j].cross(y[j]);
  rs.Phi = c[2];
  rs.Theta = c.dot(node_vector(rs.angles));
  rs.Psi = c.dot(f.f3);
  return rs;
}

RelativePairs reconstruct(const MassSystem& ms, const ReducedState& rs, const Floors& floors) {
  const int n = ms.n();
  check_reduced(rs, n, floors);
  const Vec3List xi = expand_frame(rs.xi, n);
  Vec3List zeta = expand_frame(rs.eta, n);
  const Vec3 miss = missing_zeta(rs.Phi, rs.Theta, rs.Psi, rs.angles, zeta, xi, floors);
  zeta[n - 2][0] = miss[0];
  zeta[n - 1][0] = miss[1];
  zeta[n - 1][1] = miss[2];
  const Mat3 rot = rotation_from_euler(rs.angles);
  RelativePairs out;
  out.x.resize(n);
  out.y.resize(n);
  for (int j = 0; j < n; ++j) {
    out.x[j] = rot * xi[j];
    out.y[j] = rot * zeta[j];
  }
  return out;
}

Vec3 angular_momentum_from_components(double Phi, double Theta, double Psi, const EulerTriple& t) {
  const double st = std::sin(t.theta), ct = std::cos(t.theta);
  const Vec3 e3(0.0, 0.0, 1.0);
  const Vec3 f3 = rotation_from_euler(t).col(2);
  const double s2 = st * st;
  return (Phi - Psi * ct) / s2 * e3 + Theta * node_vector(t) + (Psi - Phi * ct) / s2 * f3;
}

double hamiltonian_so3(const MassSystem& ms, const ReducedState& rs, const Floors& floors) {
  const int n = ms.n();
  check_reduced(rs, n, floors);
  const Vec3List xi = expand_frame(rs.xi, n);
  const Vec3List eta = expand_frame(rs.eta, n);
  const Vec3 miss = missing_zeta(rs.Phi, rs.Theta, rs.Psi, rs.angles, eta, xi, floors);
  double kin = 0.0;
  for (int j = 1; j <= n - 2; ++j) kin += eta[j - 1].squaredNorm() / (2.0 * ms.mu(j));
  kin += (eta[n - 2].squaredNorm() + miss[0] * miss[0]) / (2.0 * ms.mu(n - 1));
  kin += (eta[n - 1].squaredNorm() + miss[1] * miss[1] + miss[2] * miss[2]) / (2.0 * ms.mu(n));
  return kin + potential_jacobi(ms, xi, floors);
}

}  // namespace nbcoll
