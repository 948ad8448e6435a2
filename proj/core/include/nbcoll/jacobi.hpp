#pragma once

#include "nbcoll/nbody.hpp"
#include "nbcoll/types.hpp"

namespace nbcoll {

// Translation-reduced variables: total momentum P, barycenter B, and the n
// relative pairs (y_i, x_i), x_i joining body i+1 to the barycenter of bodies 1..i.
struct JacobiState {
  Vec3 P = Vec3::Zero();
  Vec3 B = Vec3::Zero();
  Vec3List y;
  Vec3List x;
};

// Row i (0-based, i < n) maps q to x_{i+1}; the last row maps q to B.
MatX jacobi_position_matrix(const MassSystem& ms);
// Rows give p_i as combinations of (y_1, ..., y_n, P).
MatX jacobi_momentum_matrix(const MassSystem& ms);

JacobiState to_jacobi(const MassSystem& ms, const CartesianState& s);
CartesianState from_jacobi(const MassSystem& ms, const JacobiState& js);

std::vector<double> reduced_masses(const MassSystem& ms);

// Physical separation q_{i+1} - q_{j+1}, 0 <= i < j <= n, written through
// the relative vectors xs[0..n-1]; x_0 is zero.
Vec3 pair_separation(const MassSystem& ms, const Vec3List& xs, int i, int j);

double potential_jacobi(const MassSystem& ms, const Vec3List& x, const Floors& floors = {});
double kinetic_jacobi(const MassSystem& ms, const Vec3List& y);
double hamiltonian_jacobi(const MassSystem& ms, const Vec3List& y, const Vec3List& x,
                          const Floors& floors = {});
Vec3 angular_momentum_jacobi(const Vec3& P, const Vec3& B, const Vec3List& y, const Vec3List& x);

}  // namespace nbcoll
