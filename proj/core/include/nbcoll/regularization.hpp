#pragma once

#include "nbcoll/shape.hpp"
#include "nbcoll/so3.hpp"
#include "nbcoll/types.hpp"

namespace nbcoll {

// w = (u, v, alpha) with u = sin(theta)cos(psi), v = sin(theta)sin(psi),
// alpha = phi + psi. chart = +1 on theta < pi/2, -1 on theta > pi/2.
// (U, V, A) are the conjugate momenta.
struct RegularizedAngles {
  double u = 0.0;
  double v = 0.0;
  double alpha = 0.0;
  int chart = +1;
  double U = 0.0;
  double V = 0.0;
  double A = 0.0;
};

// cos(theta) on the chart: chart * sqrt(1 - u^2 - v^2), clamped on the boundary.
double chart_cos(double u, double v, int chart);

RegularizedAngles regularize(double Phi, double Theta, double Psi, const EulerTriple& t,
                             const Floors& floors = {});
AngleBlock deregularize(const RegularizedAngles& w, const Floors& floors = {});

// Rates (u', v', alpha', c') of the regularized angles at zero angular
// momentum, without the |(sigma,e)|_mu^2 prefactor. c = cos(theta) is the third
// body-frame component of e3; (v, u, c) stays on the unit sphere.
Eigen::Vector4d w_rates(const MassSystem& ms, const VecX& S, const VecX& sigma, double u, double v,
                        double c, const Floors& floors = {});
// 3 x (3n-4) matrix of S -> (u', v', alpha') from w_rates.
MatX w_rate_matrix(const MassSystem& ms, const VecX& sigma, double u, double v, double c,
                   const Floors& floors = {});

// Physical-time field of w at zero angular momentum: |(sigma,e)|^2/rho^2 times w_rates.
Vec3 w_field(const MassSystem& ms, const VecX& S, const VecX& sigma, double rho, double u, double v,
             int chart = +1, const Floors& floors = {});

// Hamilton equations for (phi, theta, psi) at zero angular momentum.
Vec3 euler_rates(const MassSystem& ms, const VecX& S, const VecX& sigma, double rho, const EulerTriple& t,
                 const Floors& floors = {});

}  // namespace nbcoll
