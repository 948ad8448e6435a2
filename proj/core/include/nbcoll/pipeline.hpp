#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nbcoll/jacobi.hpp"
#include "nbcoll/nbody.hpp"
#include "nbcoll/regularization.hpp"
#include "nbcoll/shape.hpp"
#include "nbcoll/so3.hpp"

namespace nbcoll {

// One state carried through every chart, with Hamiltonian values and
// round-trip residuals of each inverse pair.
struct ChartDump {
  CartesianState cartesian;
  JacobiState jacobi;
  ReducedState reduced;
  ShapeState shape;
  RegularizedAngles angles;
  double H_cartesian = 0.0;
  double H_jacobi = 0.0;  // |P|^2/(2M) + H(y, x)
  double H_so3 = 0.0;
  double H_shape = 0.0;
  Vec3 L_cartesian = Vec3::Zero();
  Vec3 L_jacobi = Vec3::Zero();
  std::vector<std::pair<std::string, double>> residuals;
  double max_residual() const;
};

ChartDump chart_dump(const MassSystem& ms, const CartesianState& s, const Floors& floors = {});

}  // namespace nbcoll
