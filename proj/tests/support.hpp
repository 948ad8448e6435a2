#pragma once

#include <random>

#include "nbcoll/nbody.hpp"
#include "nbcoll/types.hpp"

namespace nbcoll::testing {

inline Vec3 random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return Vec3(n(rng), n(rng), n(rng));
}

// Generic state with nonzero total momentum and angular momentum.
inline CartesianState random_state(std::mt19937_64& rng, int bodies) {
  CartesianState s;
  for (int i = 0; i < bodies; ++i) {
    s.q.push_back(random_vec(rng));
    s.p.push_back(random_vec(rng, 0.5));
  }
  return s;
}

// Removes total momentum and angular momentum by a Galilean shift and a rigid rotation.
inline CartesianState zero_momentum(const MassSystem& ms, CartesianState s) {
  const Vec3 com = center_of_mass(ms, s.q), P = total_momentum(s);
  Mat3 inertia = Mat3::Zero();
  Vec3 L = Vec3::Zero();
  for (int i = 0; i < ms.bodies(); ++i) {
    s.p[i] -= ms.m(i + 1) * P / ms.total();
    const Vec3 r = s.q[i] - com;
    inertia += ms.m(i + 1) * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
    L += r.cross(s.p[i]);
  }
  const Vec3 omega = inertia.ldlt().solve(L);
  for (int i = 0; i < ms.bodies(); ++i) s.p[i] -= ms.m(i + 1) * omega.cross(s.q[i] - com);
  return s;
}

}  // namespace nbcoll::testing
