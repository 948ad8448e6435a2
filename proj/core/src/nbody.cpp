#include "nbcoll/nbody.hpp"

#include <cmath>
#include <limits>

#include "nbcoll/errors.hpp"

namespace nbcoll {
namespace {

void check_sizes(const MassSystem& ms, const CartesianState& s) {
  if (static_cast<int>(s.q.size()) != ms.bodies() || static_cast<int>(s.p.size()) != ms.bodies())
    fail(ErrorKind::InvalidArgument, "state size does not match the number of masses");
}

}  // namespace

CartesianState gravitational_field(const MassSystem& ms, const CartesianState& s, const Floors& floors) {
  check_sizes(ms, s);
  const int nb = ms.bodies();
  CartesianState d;
  d.q.resize(nb);
  d.p.assign(nb, Vec3::Zero());
  for (int i = 0; i < nb; ++i) d.q[i] = s.p[i] / ms.m(i + 1);
  for (int i = 0; i < nb; ++i) {
    for (int j = i + 1; j < nb; ++j) {
      const Vec3 r = s.q[j] - s.q[i];
      const double dist = r.norm();
      if (dist < floors.r_min) fail(ErrorKind::SingularConfiguration, "mutual distance below floor");
      const Vec3 f = ms.m(i + 1) * ms.m(j + 1) / (dist * dist * dist) * r;
      d.p[i] += f;
      d.p[j] -= f;
    }
  }
  return d;
}

double kinetic_cartesian(const MassSystem& ms, const CartesianState& s) {
  double t = 0.0;
  for (int i = 0; i < ms.bodies(); ++i) t += s.p[i].squaredNorm() / (2.0 * ms.m(i + 1));
  return t;
}

double potential_cartesian(const MassSystem& ms, const Vec3List& q, const Floors& floors) {
  double u = 0.0;
  for (int i = 0; i < ms.bodies(); ++i) {
    for (int j = i + 1; j < ms.bodies(); ++j) {
      const double dist = (q[i] - q[j]).norm();
      if (dist < floors.r_min) fail(ErrorKind::SingularConfiguration, "mutual distance below floor");
      u -= ms.m(i + 1) * ms.m(j + 1) / dist;
    }
  }
  return u;
}

double hamiltonian_cartesian(const MassSystem& ms, const CartesianState& s, const Floors& floors) {
  check_sizes(ms, s);
  return kinetic_cartesian(ms, s) + potential_cartesian(ms, s.q, floors);
}

Vec3 angular_momentum_cartesian(const CartesianState& s) {
  Vec3 c = Vec3::Zero();
  for (std::size_t i = 0; i < s.q.size(); ++i) c += s.q[i].cross(s.p[i]);
  return c;
}

Vec3 center_of_mass(const MassSystem& ms, const Vec3List& q) {
  Vec3 b = Vec3::Zero();
  for (int i = 0; i < ms.bodies(); ++i) b += ms.m(i + 1) * q[i];
  return b / ms.total();
}

Vec3 total_momentum(const CartesianState& s) {
  Vec3 p = Vec3::Zero();
  for (const auto& pi : s.p) p += pi;
  return p;
}

double min_separation(const Vec3List& q) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j) best = std::min(best, (q[i] - q[j]).norm());
  return best;
}

Vec3List normalized_configuration(const MassSystem& ms, const Vec3List& q, const Floors& floors) {
  const Vec3 b = center_of_mass(ms, q);
  double norm2 = 0.0;
  for (int i = 0; i < ms.bodies(); ++i) norm2 += ms.m(i + 1) * (q[i] - b).squaredNorm();
  const double norm = std::sqrt(norm2);
  if (norm < floors.radius) fail(ErrorKind::Degenerate, "configuration collapsed onto its barycenter");
  Vec3List out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = (q[i] - b) / norm;
  return out;
}

VecX pack_cartesian(const CartesianState& s) {
  const int nb = static_cast<int>(s.q.size());
  VecX y(6 * nb);
  for (int i = 0; i < nb; ++i) {
    y.segment<3>(3 * i) = s.p[i];
    y.segment<3>(3 * nb + 3 * i) = s.q[i];
  }
  return y;
}

CartesianState unpack_cartesian(const VecX& y, int bodies) {
  CartesianState s;
  s.p.resize(bodies);
  s.q.resize(bodies);
  for (int i = 0; i < bodies; ++i) {
    s.p[i] = y.segment<3>(3 * i);
    s.q[i] = y.segment<3>(3 * bodies + 3 * i);
  }
  return s;
}

CartesianState CartesianTrajectory::at(double time) const {
  return unpack_cartesian(solution.at(time), static_cast<int>(states.front().q.size()));
}

CartesianTrajectory integrate_cartesian(const MassSystem& ms, const CartesianState& s0, double t0,
                                        double t1, double tol, const Floors& floors) {
  if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  check_sizes(ms, s0);
  const int nb = ms.bodies();
  if (min_separation(s0.q) < floors.r_min) fail(ErrorKind::SingularConfiguration, "initial state inside the singular set");
  // Stages may dip below r_min so a step can cross the collision event.
  Floors field_floors = floors;
  field_floors.r_min = 1e-3 * floors.r_min;
  auto rhs = [&](double, const VecX& y, VecX& dy) {
    dy = pack_cartesian(gravitational_field(ms, unpack_cartesian(y, nb), field_floors));
  };
  ode::Event collision{"collision",
                       [&](double, const VecX& y) {
                         return min_separation(unpack_cartesian(y, nb).q) - floors.r_min;
                       },
                       -1, true};
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol;
  CartesianTrajectory out;
  out.solution = ode::integrate(rhs, t0, pack_cartesian(s0), t1, opt, {collision});
  out.t = out.solution.t;
  for (const auto& y : out.solution.y) out.states.push_back(unpack_cartesian(y, nb));
  if (const auto* hit = out.solution.first_event("collision")) {
    out.collided = true;
    out.collision_time = hit->t;
  }
  return out;
}

}  // namespace nbcoll
