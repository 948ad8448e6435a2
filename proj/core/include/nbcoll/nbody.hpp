#pragma once

#include <vector>

#include "nbcoll/ode.hpp"
#include "nbcoll/types.hpp"

namespace nbcoll {

// Momenta and positions of the n+1 bodies.
struct CartesianState {
  Vec3List p;
  Vec3List q;
};

// Time derivative: q-slot holds dq/dt, p-slot holds dp/dt.
CartesianState gravitational_field(const MassSystem& ms, const CartesianState& s,
                                   const Floors& floors = {});

double kinetic_cartesian(const MassSystem& ms, const CartesianState& s);
double potential_cartesian(const MassSystem& ms, const Vec3List& q, const Floors& floors = {});
double hamiltonian_cartesian(const MassSystem& ms, const CartesianState& s, const Floors& floors = {});
Vec3 angular_momentum_cartesian(const CartesianState& s);
Vec3 center_of_mass(const MassSystem& ms, const Vec3List& q);
Vec3 total_momentum(const CartesianState& s);
double min_separation(const Vec3List& q);

// (q_i - B)/|q - B|_m with |q|_m^2 = sum m_i |q_i|^2.
Vec3List normalized_configuration(const MassSystem& ms, const Vec3List& q, const Floors& floors = {});

VecX pack_cartesian(const CartesianState& s);
CartesianState unpack_cartesian(const VecX& y, int bodies);

struct CartesianTrajectory {
  std::vector<double> t;
  std::vector<CartesianState> states;
  bool collided = false;
  double collision_time = 0.0;
  ode::Solution solution;
  CartesianState at(double time) const;
};

// Adaptive integration of the Newtonian flow. Halts with collided = true when
// the minimal mutual distance reaches floors.r_min.
CartesianTrajectory integrate_cartesian(const MassSystem& ms, const CartesianState& s0, double t0,
                                        double t1, double tol, const Floors& floors = {});

}  // namespace nbcoll
