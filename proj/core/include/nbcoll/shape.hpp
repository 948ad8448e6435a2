#pragma once

#include <cmath>
#include <vector>

#include "nbcoll/errors.hpp"
#include "nbcoll/so3.hpp"
#include "nbcoll/types.hpp"

namespace nbcoll {

// Shape/radius canonical chart. S and sigma use the packed shape layout
// (3n-4 entries); R is the radial momentum, rho = |xi|_mu > 0.
struct ShapeState {
  VecX S;
  double R = 0.0;
  VecX sigma;
  double rho = 1.0;
};

struct FramePair {
  VecX eta;
  VecX xi;
};

// Angle block of the reduced chart. Defaults describe zero angular momentum.
struct AngleBlock {
  double Phi = 0.0;
  double Theta = 0.0;
  double Psi = 0.0;
  EulerTriple angles{0.0, M_PI / 2, 0.0};
};

ShapeState shape_split(const MassSystem& ms, const VecX& eta, const VecX& xi, const Floors& floors = {});
FramePair shape_merge(const MassSystem& ms, const ShapeState& ss, const Floors& floors = {});

// |(sigma, e)|_mu.
double shape_norm(const MassSystem& ms, const VecX& sigma);
double mu_norm(const MassSystem& ms, const VecX& xi);

// V(sigma) = |(sigma,e)|_mu sum_{i<j} m_{i+1} m_{j+1}/|d_ij(sigma)| > 0.
double shape_potential(const MassSystem& ms, const VecX& sigma, const Floors& floors = {});
VecX shape_potential_gradient(const MassSystem& ms, const VecX& sigma, const Floors& floors = {});
// A(sigma) with T(S, sigma) = S^T A S / 2 at zero angular momentum.
MatX shape_metric(const MassSystem& ms, const VecX& sigma, const Floors& floors = {});
double shape_kinetic(const MassSystem& ms, const VecX& S, const VecX& sigma, const Floors& floors = {});

// 3 x (3n-4) coefficient matrices of S -> Psi^{(p)}(S, sigma).
MatX psi_forms(const MassSystem& ms, const VecX& sigma, int p);

double hamiltonian_shape(const MassSystem& ms, const ShapeState& ss, const AngleBlock& ab = {},
                         const Floors& floors = {});

namespace detail {

// Scalar-generic kinetic and potential terms; instantiated with double and
// with automatic-differentiation scalars.
template <class Sc>
Sc kinetic_T(const MassSystem& ms, const VecX& S, const Eigen::Matrix<Sc, Eigen::Dynamic, 1>& sig,
             const Floors& floors) {
  using V3 = Eigen::Matrix<Sc, 3, 1>;
  using std::abs;
  const int n = ms.n();
  std::vector<V3> s(n, V3::Zero()), p(n, V3::Zero());
  for (int j = 0; j < n - 2; ++j) {
    for (int c = 0; c < 3; ++c) {
      s[j][c] = sig[3 * j + c];
      p[j][c] = Sc(S[3 * j + c]);
    }
  }
  const int k = 3 * (n - 2);
  s[n - 2][1] = sig[k];
  s[n - 2][2] = sig[k + 1];
  p[n - 2][1] = Sc(S[k]);
  p[n - 2][2] = Sc(S[k + 1]);
  Sc n2 = Sc(ms.mu(n));
  Sc q = Sc(0.0);
  Sc dot = Sc(0.0);
  V3 lo = V3::Zero();
  for (int j = 0; j < n - 1; ++j) {
    n2 += ms.mu(j + 1) * s[j].squaredNorm();
    q += p[j].squaredNorm() / ms.mu(j + 1);
    dot += p[j].dot(s[j]);
    if (j < n - 2) lo += s[j].cross(p[j]);
  }
  q += dot * dot / ms.mu(n);
  const V3 hi = lo + s[n - 2].cross(p[n - 2]);
  if (n >= 3) {
    const Sc s2 = s[n - 2][1];
    if (abs(s2) < floors.xi_n12) fail(ErrorKind::DivisionDegenerate, "sigma_{n-1,2} below floor");
    const Sc ratio = s[n - 2][2] / s2;
    q += lo[2] * lo[2] / (ms.mu(n - 1) * s2 * s2);
    const Sc t2 = lo[1] + ratio * lo[2];
    q += t2 * t2 / ms.mu(n);
  }
  q += hi[0] * hi[0] / ms.mu(n);
  return n2 * q / 2.0;
}

template <class Sc>
Sc potential_V(const MassSystem& ms, const Eigen::Matrix<Sc, Eigen::Dynamic, 1>& sig, const Floors& floors) {
  using V3 = Eigen::Matrix<Sc, 3, 1>;
  using std::sqrt;
  const int n = ms.n();
  std::vector<V3> s(n, V3::Zero());
  for (int j = 0; j < n - 2; ++j)
    for (int c = 0; c < 3; ++c) s[j][c] = sig[3 * j + c];
  const int k = 3 * (n - 2);
  s[n - 2][1] = sig[k];
  s[n - 2][2] = sig[k + 1];
  s[n - 1][2] = Sc(1.0);
  Sc n2 = Sc(ms.mu(n));
  for (int j = 0; j < n - 1; ++j) n2 += ms.mu(j + 1) * s[j].squaredNorm();
  Sc u = Sc(0.0);
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      V3 d = s[j - 1];
      if (i >= 1) d -= (ms.M(i) / ms.M(i + 1)) * s[i - 1];
      for (int l = i + 1; l <= j - 1; ++l) d += (ms.m(l + 1) / ms.M(l + 1)) * s[l - 1];
      const Sc dist = sqrt(d.squaredNorm());
      if (dist < floors.r_min) fail(ErrorKind::SingularConfiguration, "shape at a collision");
      u += ms.m(i + 1) * ms.m(j + 1) / dist;
    }
  }
  return sqrt(n2) * u;
}

}  // namespace detail
}  // namespace nbcoll
