#include "nbcoll/shape.hpp"

#include "nbcoll/jacobi.hpp"

namespace nbcoll {
namespace {

void check_shape(const MassSystem& ms, const VecX& sigma) {
  if (sigma.size() != shape_dim(ms.n())) fail(ErrorKind::InvalidArgument, "shape vector has wrong size");
}

}  // namespace

double mu_norm(const MassSystem& ms, const VecX& xi) {
  const Vec3List full = expand_frame(xi, ms.n());
  double s = 0.0;
  for (int j = 1; j <= ms.n(); ++j) s += ms.mu(j) * full[j - 1].squaredNorm();
  return std::sqrt(s);
}

double shape_norm(const MassSystem& ms, const VecX& sigma) {
  check_shape(ms, sigma);
  const Vec3List full = expand_shape(sigma, ms.n(), 1.0);
  double s = 0.0;
  for (int j = 1; j <= ms.n(); ++j) s += ms.mu(j) * full[j - 1].squaredNorm();
  return std::sqrt(s);
}

ShapeState shape_split(const MassSystem& ms, const VecX& eta, const VecX& xi, const Floors& floors) {
  const int n = ms.n();
  if (xi.size() != frame_dim(n) || eta.size() != frame_dim(n))
    fail(ErrorKind::InvalidArgument, "frame vectors have wrong size");
  const double r = xi[xi.size() - 1];
  if (!(r > floors.xi_n3)) fail(ErrorKind::Degenerate, "r below floor");
  const int d = shape_dim(n);
  ShapeState ss;
  ss.sigma = xi.head(d) / r;
  ss.rho = mu_norm(ms, xi);
  const double nn = shape_norm(ms, ss.sigma);
  // Sum sigma_i . eta_i + R = R_radial N, then S_i = (rho/N)(eta_i - (R_radial/N) mu_i sigma_i).
  const Vec3List sig = expand_shape(ss.sigma, n, 1.0);
  const Vec3List et = expand_frame(eta, n);
  double acc = eta[eta.size() - 1];
  for (int j = 0; j < n - 1; ++j) acc += sig[j].dot(et[j]);
  ss.R = acc / nn;
  Vec3List s(n, Vec3::Zero());
  for (int j = 0; j < n - 1; ++j) s[j] = ss.rho / nn * (et[j] - ss.R / nn * ms.mu(j + 1) * sig[j]);
  ss.S = pack_shape(s);
  return ss;
}

FramePair shape_merge(const MassSystem& ms, const ShapeState& ss, const Floors& floors) {
  const int n = ms.n();
  check_shape(ms, ss.sigma);
  if (ss.S.size() != ss.sigma.size()) fail(ErrorKind::InvalidArgument, "shape momenta have wrong size");
  if (!(ss.rho > floors.radius)) fail(ErrorKind::Degenerate, "rho must be positive");
  const double nn = shape_norm(ms, ss.sigma);
  const Vec3List sig = expand_shape(ss.sigma, n, 1.0);
  const Vec3List s = expand_shape(ss.S, n, 0.0);
  FramePair out;
  VecX sig_e(frame_dim(n));
  sig_e << ss.sigma, 1.0;
  out.xi = ss.rho / nn * sig_e;
  Vec3List et(n, Vec3::Zero());
  double dot = 0.0;
  for (int j = 0; j < n - 1; ++j) {
    et[j] = nn / ss.rho * s[j] + ss.R / nn * ms.mu(j + 1) * sig[j];
    dot += s[j].dot(sig[j]);
  }
  et[n - 1] = Vec3(0.0, 0.0, -nn / ss.rho * dot + ms.mu(n) * ss.R / nn);
  out.eta = pack_frame(et);
  return out;
}

double shape_potential(const MassSystem& ms, const VecX& sigma, const Floors& floors) {
  check_shape(ms, sigma);
  return detail::potential_V<double>(ms, sigma, floors);
}

VecX shape_potential_gradient(const MassSystem& ms, const VecX& sigma, const Floors& floors) {
  check_shape(ms, sigma);
  const int n = ms.n();
  const Vec3List s = expand_shape(sigma, n, 1.0);
  const double nn = shape_norm(ms, sigma);
  double u = 0.0;
  Vec3List du(n, Vec3::Zero());
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const Vec3 d = pair_separation(ms, s, i, j);
      const double dist = d.norm();
      if (dist < floors.r_min) fail(ErrorKind::SingularConfiguration, "shape at a collision");
      const double mm = ms.m(i + 1) * ms.m(j + 1);
      u += mm / dist;
      const Vec3 g = -mm / (dist * dist * dist) * d;
      if (i >= 1) du[i - 1] += -ms.M(i) / ms.M(i + 1) * g;
      for (int l = i + 1; l <= j - 1; ++l) du[l - 1] += ms.m(l + 1) / ms.M(l + 1) * g;
      du[j - 1] += g;
    }
  }
  Vec3List grad(n, Vec3::Zero());
  for (int l = 0; l < n - 1; ++l) grad[l] = ms.mu(l + 1) * s[l] / nn * u + nn * du[l];
  return pack_shape(grad);
}

MatX psi_forms(const MassSystem& ms, const VecX& sigma, int p) {
  const int n = ms.n();
  check_shape(ms, sigma);
  const Vec3List s = expand_shape(sigma, n, 1.0);
  const int d = shape_dim(n);
  MatX f = MatX::Zero(3, d);
  // (sigma_j x S_j)_k = S_j . (e_k x sigma_j).
  for (int j = 0; j < std::min(p, n - 1); ++j) {
    for (int k = 0; k < 3; ++k) {
      const Vec3 c = Vec3::Unit(k).cross(s[j]);
      if (j < n - 2) {
        f.block<1, 3>(k, 3 * j) = c.transpose();
      } else {
        f(k, 3 * j) = c[1];
        f(k, 3 * j + 1) = c[2];
      }
    }
  }
  return f;
}

MatX shape_metric(const MassSystem& ms, const VecX& sigma, const Floors& floors) {
  const int n = ms.n();
  check_shape(ms, sigma);
  const int d = shape_dim(n);
  MatX g = MatX::Zero(d, d);
  for (int j = 0; j < n - 2; ++j) g.block<3, 3>(3 * j, 3 * j) = Mat3::Identity() / ms.mu(j + 1);
  g(d - 2, d - 2) = g(d - 1, d - 1) = 1.0 / ms.mu(n - 1);
  g += sigma * sigma.transpose() / ms.mu(n);
  const MatX lo = psi_forms(ms, sigma, n - 2);
  const MatX hi = psi_forms(ms, sigma, n - 1);
  if (n >= 3) {
    const double s2 = sigma[d - 2];
    if (std::abs(s2) < floors.xi_n12) fail(ErrorKind::DivisionDegenerate, "sigma_{n-1,2} below floor");
    const VecX l3 = lo.row(2).transpose();
    const VecX l2 = lo.row(1).transpose() + sigma[d - 1] / s2 * l3;
    g += l3 * l3.transpose() / (ms.mu(n - 1) * s2 * s2);
    g += l2 * l2.transpose() / ms.mu(n);
  }
  const VecX l1 = hi.row(0).transpose();
  g += l1 * l1.transpose() / ms.mu(n);
  const double nn = shape_norm(ms, sigma);
  return nn * nn * g;
}

double shape_kinetic(const MassSystem& ms, const VecX& S, const VecX& sigma, const Floors& floors) {
  check_shape(ms, sigma);
  if (S.size() != sigma.size()) fail(ErrorKind::InvalidArgument, "shape momenta have wrong size");
  return detail::kinetic_T<double>(ms, S, sigma, floors);
}

double hamiltonian_shape(const MassSystem& ms, const ShapeState& ss, const AngleBlock& ab,
                         const Floors& floors) {
  const int n = ms.n();
  check_shape(ms, ss.sigma);
  if (!(ss.rho > floors.radius)) fail(ErrorKind::Degenerate, "rho must be positive");
  const int d = shape_dim(n);
  const Vec3List s = expand_shape(ss.sigma, n, 1.0);
  const Vec3List p = expand_shape(ss.S, n, 0.0);
  double q = 0.0, dot = 0.0;
  for (int j = 0; j < n - 1; ++j) {
    q += p[j].squaredNorm() / ms.mu(j + 1);
    dot += p[j].dot(s[j]);
  }
  q += dot * dot / ms.mu(n);
  const Vec3 lo = psi_vector(s, p, n - 2);
  const Vec3 hi = psi_vector(s, p, n - 1);
  const double dpsi = ab.Psi - lo[2];
  const double s2 = ss.sigma[d - 2];
  double ratio_term = 0.0;
  if (dpsi != 0.0) {
    if (std::abs(s2) < floors.xi_n12) fail(ErrorKind::DivisionDegenerate, "sigma_{n-1,2} below floor");
    q += dpsi * dpsi / (ms.mu(n - 1) * s2 * s2);
    ratio_term = ss.sigma[d - 1] / s2 * dpsi;
  }
  double g = 0.0, cf1 = 0.0, cf2 = 0.0;
  if (ab.Phi != 0.0 || ab.Theta != 0.0 || ab.Psi != 0.0) {
    const double st = std::sin(ab.angles.theta);
    if (std::abs(st) < floors.sin_theta) fail(ErrorKind::GimbalDegenerate, "sin(theta) below floor");
    g = (ab.Phi - ab.Psi * std::cos(ab.angles.theta)) / st;
    cf1 = ab.Theta * std::cos(ab.angles.psi) + g * std::sin(ab.angles.psi);
    cf2 = -ab.Theta * std::sin(ab.angles.psi) + g * std::cos(ab.angles.psi);
  }
  const double t1 = cf2 - lo[1] + ratio_term;
  const double t2 = -cf1 + hi[0];
  q += (t1 * t1 + t2 * t2) / ms.mu(n);
  const double nn = shape_norm(ms, ss.sigma);
  const double v = shape_potential(ms, ss.sigma, floors);
  return ss.R * ss.R / 2.0 + nn * nn / (2.0 * ss.rho * ss.rho) * q - v / ss.rho;
}

}  // namespace nbcoll
