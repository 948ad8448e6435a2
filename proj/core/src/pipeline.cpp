#include "nbcoll/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace nbcoll {
namespace {

double list_distance(const Vec3List& a, const Vec3List& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return worst;
}

double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

double ChartDump::max_residual() const {
  double worst = 0.0;
  for (const auto& [name, value] : residuals) worst = std::max(worst, value);
  return worst;
}

ChartDump chart_dump(const MassSystem& ms, const CartesianState& s, const Floors& floors) {
  ChartDump out;
  out.cartesian = s;
  out.jacobi = to_jacobi(ms, s);
  const JacobiState& js = out.jacobi;
  out.reduced = reduce(ms, js.y, js.x, floors);
  out.shape = shape_split(ms, out.reduced.eta, out.reduced.xi, floors);
  out.angles = regularize(out.reduced.Phi, out.reduced.Theta, out.reduced.Psi, out.reduced.angles, floors);

  out.H_cartesian = hamiltonian_cartesian(ms, s, floors);
  out.H_jacobi = js.P.squaredNorm() / (2.0 * ms.total()) + hamiltonian_jacobi(ms, js.y, js.x, floors);
  const double h_cm = js.P.squaredNorm() / (2.0 * ms.total());
  out.H_so3 = h_cm + hamiltonian_so3(ms, out.reduced, floors);
  AngleBlock ab{out.reduced.Phi, out.reduced.Theta, out.reduced.Psi, out.reduced.angles};
  out.H_shape = h_cm + hamiltonian_shape(ms, out.shape, ab, floors);
  out.L_cartesian = angular_momentum_cartesian(s);
  out.L_jacobi = angular_momentum_jacobi(js.P, js.B, js.y, js.x);

  const CartesianState back = from_jacobi(ms, js);
  out.residuals.emplace_back("jacobi_q", list_distance(back.q, s.q));
  out.residuals.emplace_back("jacobi_p", list_distance(back.p, s.p));
  const RelativePairs rp = reconstruct(ms, out.reduced, floors);
  out.residuals.emplace_back("so3_x", list_distance(rp.x, js.x));
  out.residuals.emplace_back("so3_y", list_distance(rp.y, js.y));
  const FramePair fp = shape_merge(ms, out.shape, floors);
  out.residuals.emplace_back("shape_xi", (fp.xi - out.reduced.xi).cwiseAbs().maxCoeff());
  out.residuals.emplace_back("shape_eta", (fp.eta - out.reduced.eta).cwiseAbs().maxCoeff());
  const AngleBlock back_ab = deregularize(out.angles, floors);
  out.residuals.emplace_back(
      "angles", std::max({std::abs(back_ab.Phi - out.reduced.Phi), std::abs(back_ab.Theta - out.reduced.Theta),
                          std::abs(back_ab.Psi - out.reduced.Psi),
                          std::abs(back_ab.angles.theta - out.reduced.angles.theta),
                          std::abs(std::remainder(back_ab.angles.phi - out.reduced.angles.phi, 2 * M_PI)),
                          std::abs(std::remainder(back_ab.angles.psi - out.reduced.angles.psi, 2 * M_PI))}));
  out.residuals.emplace_back("H_jacobi", relative(out.H_jacobi, out.H_cartesian));
  out.residuals.emplace_back("H_so3", relative(out.H_so3, out.H_cartesian));
  out.residuals.emplace_back("H_shape", relative(out.H_shape, out.H_cartesian));
  out.residuals.emplace_back("L", (out.L_jacobi - out.L_cartesian).cwiseAbs().maxCoeff());
  return out;
}

}  // namespace nbcoll
