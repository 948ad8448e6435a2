#pragma once

#include "nbcoll/jacobi.hpp"
#include "nbcoll/types.hpp"

namespace nbcoll {

// Precession, nutation, proper rotation; theta in (0, pi).
struct EulerTriple {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

// Columns f1, f2, f3: right-handed orthonormal.
struct Frame {
  Vec3 f1, f2, f3;
  Mat3 matrix() const;
};

// f3 = x_n/|x_n|, f1 = x_n x x_{n-1}/|x_n x x_{n-1}|, f2 = f3 x f1.
Frame moving_frame(const Vec3& x_nm1, const Vec3& x_n, const Floors& floors = {});
EulerTriple euler_angles(const Mat3& frame, const Floors& floors = {});
// R3(phi) R1(theta) R3(psi).
Mat3 rotation_from_euler(const EulerTriple& t);
// Node direction e3 x f3/|e3 x f3| = R3(phi) R1(theta) e1.
Vec3 node_vector(const EulerTriple& t);

// Canonical point (Phi, Theta, Psi, eta; phi, theta, psi, xi). eta and xi use
// the packed frame layout; their last entries are R and r = xi_{n,3}.
struct ReducedState {
  double Phi = 0.0;
  double Theta = 0.0;
  double Psi = 0.0;
  EulerTriple angles;
  VecX eta;
  VecX xi;
};

struct RelativePairs {
  Vec3List y;
  Vec3List x;
};

// Sum_{j<=p} a_j x b_j for full 3-vectors; p = 0 gives zero.
Vec3 psi_vector(const Vec3List& a, const Vec3List& b, int p);
// Component k (1..3) of sum_{j<=p} xi_j x eta_j.
double psi_partial(const Vec3List& eta, const Vec3List& xi, int k, int p);

// The three momentum components lost to the structural zeros of xi:
// (zeta_{n-1,1}, zeta_{n,1}, zeta_{n,2}).
Vec3 missing_zeta(double Phi, double Theta, double Psi, const EulerTriple& angles,
                  const Vec3List& eta_full, const Vec3List& xi_full, const Floors& floors = {});

ReducedState reduce(const MassSystem& ms, const Vec3List& y, const Vec3List& x, const Floors& floors = {});
RelativePairs reconstruct(const MassSystem& ms, const ReducedState& rs, const Floors& floors = {});

// Angular momentum from its components along e3, gamma, f3.
Vec3 angular_momentum_from_components(double Phi, double Theta, double Psi, const EulerTriple& t);

double hamiltonian_so3(const MassSystem& ms, const ReducedState& rs, const Floors& floors = {});

}  // namespace nbcoll
