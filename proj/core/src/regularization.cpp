#include "nbcoll/regularization.hpp"

#include <algorithm>
#include <cmath>

#include "nbcoll/errors.hpp"

namespace nbcoll {
namespace {

struct PsiTerms {
  double lo2 = 0.0, lo3 = 0.0, hi1 = 0.0;  // Psi_2^{(n-2)}, Psi_3^{(n-2)}, Psi_1^{(n-1)}
  double inv_s2 = 0.0, ratio = 0.0;        // 1/sigma_{n-1,2}, sigma_{n-1,3}/sigma_{n-1,2}
};

PsiTerms psi_terms(const MassSystem& ms, const VecX& S, const VecX& sigma, const Floors& floors) {
  const int n = ms.n();
  const int d = shape_dim(n);
  if (sigma.size() != d || S.size() != d) fail(ErrorKind::InvalidArgument, "shape vectors have wrong size");
  const Vec3List s = expand_shape(sigma, n, 1.0);
  const Vec3List p = expand_shape(S, n, 0.0);
  PsiTerms t;
  const Vec3 lo = psi_vector(s, p, n - 2);
  t.lo2 = lo[1];
  t.lo3 = lo[2];
  t.hi1 = psi_vector(s, p, n - 1)[0];
  // For n = 2 both lower sums vanish identically and the shape ratios drop out.
  if (n >= 3) {
    const double s2 = sigma[d - 2];
    if (std::abs(s2) < floors.xi_n12) fail(ErrorKind::DivisionDegenerate, "sigma_{n-1,2} below floor");
    t.inv_s2 = 1.0 / s2;
    t.ratio = sigma[d - 1] / s2;
  }
  return t;
}

}  // namespace

double chart_cos(double u, double v, int chart) {
  return (chart >= 0 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, 1.0 - u * u - v * v));
}

RegularizedAngles regularize(double Phi, double Theta, double Psi, const EulerTriple& t, const Floors& floors) {
  const double st = std::sin(t.theta), ct = std::cos(t.theta);
  if (std::abs(st) < floors.sin_theta) fail(ErrorKind::ChartOrigin, "theta at 0 or pi");
  if (std::abs(ct) < floors.sin_theta) fail(ErrorKind::ChartSeam, "theta at pi/2");
  const double cp = std::cos(t.psi), sp = std::sin(t.psi);
  RegularizedAngles w;
  w.u = st * cp;
  w.v = st * sp;
  w.alpha = t.phi + t.psi;
  w.chart = ct > 0.0 ? +1 : -1;
  w.A = Phi;
  // Theta = (U cos psi + V sin psi) cos theta, Psi - A = (-U sin psi + V cos psi) sin theta.
  const double a = Theta / ct;
  const double b = (Psi - Phi) / st;
  w.U = a * cp - b * sp;
  w.V = a * sp + b * cp;
  return w;
}

AngleBlock deregularize(const RegularizedAngles& w, const Floors& floors) {
  const double s = std::hypot(w.u, w.v);
  if (s < floors.sin_theta) fail(ErrorKind::ChartOrigin, "(u, v) at the origin");
  if (s >= 1.0 - floors.sin_theta) fail(ErrorKind::ChartSeam, "(u, v) on the unit circle");
  AngleBlock ab;
  ab.angles.psi = std::atan2(w.v, w.u);
  ab.angles.phi = w.alpha - ab.angles.psi;
  ab.angles.theta = w.chart >= 0 ? std::asin(s) : M_PI - std::asin(s);
  const double ct = chart_cos(w.u, w.v, w.chart);
  ab.Phi = w.A;
  ab.Theta = (w.U * w.u + w.V * w.v) / s * ct;
  ab.Psi = -w.U * w.v + w.V * w.u + w.A;
  return ab;
}

Eigen::Vector4d w_rates(const MassSystem& ms, const VecX& S, const VecX& sigma, double u, double v, double c,
                        const Floors& floors) {
  const int n = ms.n();
  const PsiTerms t = psi_terms(ms, S, sigma, floors);
  const double third = t.lo3 * t.inv_s2 * t.inv_s2 / ms.mu(n - 1);
  const double b = (t.lo2 + t.ratio * t.lo3) / ms.mu(n);
  const double a = third + t.ratio * b;
  const double dd = t.hi1 / ms.mu(n);
  if (1.0 + c < floors.sin_theta) fail(ErrorKind::DivisionDegenerate, "alpha rate singular at theta = pi");
  Eigen::Vector4d r;
  r[0] = a * v - dd * c;
  r[1] = -a * u + b * c;
  r[2] = -third - b * (u / (1.0 + c) + t.ratio) - dd * v / (1.0 + c);
  r[3] = dd * u - b * v;
  return r;
}

MatX w_rate_matrix(const MassSystem& ms, const VecX& sigma, double u, double v, double c, const Floors& floors) {
  const int d = shape_dim(ms.n());
  MatX m(3, d);
  for (int k = 0; k < d; ++k) m.col(k) = w_rates(ms, VecX::Unit(d, k), sigma, u, v, c, floors).head<3>();
  return m;
}

Vec3 w_field(const MassSystem& ms, const VecX& S, const VecX& sigma, double rho, double u, double v, int chart,
             const Floors& floors) {
  if (u * u + v * v > 1.0 + 1e-12) fail(ErrorKind::InvalidArgument, "(u, v) outside the closed unit disk");
  if (!(rho > floors.radius)) fail(ErrorKind::Degenerate, "rho must be positive");
  const double nn = shape_norm(ms, sigma);
  return nn * nn / (rho * rho) * w_rates(ms, S, sigma, u, v, chart_cos(u, v, chart), floors).head<3>();
}

Vec3 euler_rates(const MassSystem& ms, const VecX& S, const VecX& sigma, double rho, const EulerTriple& e,
                 const Floors& floors) {
  const int n = ms.n();
  const PsiTerms t = psi_terms(ms, S, sigma, floors);
  const double st = std::sin(e.theta), ct = std::cos(e.theta);
  if (std::abs(st) < floors.sin_theta) fail(ErrorKind::GimbalDegenerate, "sin(theta) below floor");
  const double cp = std::cos(e.psi), sp = std::sin(e.psi);
  const double nn = shape_norm(ms, sigma);
  const double k = nn * nn / (rho * rho);
  const double p2 = t.lo2 + t.ratio * t.lo3;
  Vec3 r;
  r[0] = -k / ms.mu(n) * (cp / st * p2 + sp / st * t.hi1);
  r[1] = k / ms.mu(n) * (sp * p2 - cp * t.hi1);
  r[2] = k * (-t.lo3 * t.inv_s2 * t.inv_s2 / ms.mu(n - 1) +
              (-(-ct / st * cp + t.ratio) * p2 + ct / st * sp * t.hi1) / ms.mu(n));
  return r;
}

}  // namespace nbcoll
