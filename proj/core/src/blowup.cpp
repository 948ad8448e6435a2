#include "nbcoll/blowup.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <cmath>
#include <limits>

#include "nbcoll/errors.hpp"

namespace nbcoll {
namespace {

using AD = Eigen::AutoDiffScalar<VecX>;
using ADVec = Eigen::Matrix<AD, Eigen::Dynamic, 1>;

void check_blowup(const MassSystem& ms, const BlowupState& bs) {
  const int d = shape_dim(ms.n());
  if (bs.S.size() != d || bs.sigma.size() != d) fail(ErrorKind::InvalidArgument, "blow-up state has wrong size");
}

template <class F>
VecX central_gradient(const VecX& x, double step, F&& f) {
  VecX g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = step * std::max(1.0, std::abs(x[k]));
    VecX p = x;
    p[k] = x[k] + 2 * h;
    const double f2 = f(p);
    p[k] = x[k] + h;
    const double f1 = f(p);
    p[k] = x[k] - h;
    const double m1 = f(p);
    p[k] = x[k] - 2 * h;
    const double m2 = f(p);
    g[k] = (-f2 + 8 * f1 - 8 * m1 + m2) / (12 * h);
  }
  return g;
}

}  // namespace

BlowupState blow_up(const ShapeState& ss, const RegularizedAngles& w) {
  if (!(ss.rho >= 0.0)) fail(ErrorKind::Degenerate, "rho must be non-negative");
  BlowupState bs;
  bs.rho = ss.rho;
  const double sq = std::sqrt(ss.rho);
  bs.R = ss.R * sq;
  bs.S = ss.S / sq;
  bs.sigma = ss.sigma;
  bs.u = w.u;
  bs.v = w.v;
  bs.alpha = w.alpha;
  bs.chart = w.chart;
  return bs;
}

ShapeState blow_down(const BlowupState& bs, const Floors& floors) {
  if (!(bs.rho > floors.radius)) fail(ErrorKind::Degenerate, "blow-down needs rho > 0");
  ShapeState ss;
  ss.rho = bs.rho;
  const double sq = std::sqrt(bs.rho);
  ss.R = bs.R / sq;
  ss.S = bs.S * sq;
  ss.sigma = bs.sigma;
  return ss;
}

double kinetic_T(const MassSystem& ms, const VecX& S, const VecX& sigma, const Floors& floors) {
  return shape_kinetic(ms, S, sigma, floors);
}

double potential_V(const MassSystem& ms, const VecX& sigma, const Floors& floors) {
  return shape_potential(ms, sigma, floors);
}

VecX kinetic_gradient_fd(const MassSystem& ms, const VecX& S, const VecX& sigma, double step,
                         const Floors& floors) {
  return central_gradient(sigma, step, [&](const VecX& s) { return shape_kinetic(ms, S, s, floors); });
}

VecX kinetic_gradient_ad(const MassSystem& ms, const VecX& S, const VecX& sigma, const Floors& floors) {
  const Eigen::Index d = sigma.size();
  ADVec s(d);
  for (Eigen::Index k = 0; k < d; ++k) s[k] = AD(sigma[k], d, k);
  return detail::kinetic_T<AD>(ms, S, s, floors).derivatives();
}

VecX potential_gradient_fd(const MassSystem& ms, const VecX& sigma, double step, const Floors& floors) {
  return central_gradient(sigma, step, [&](const VecX& s) { return shape_potential(ms, s, floors); });
}

VecX kinetic_gradient(const MassSystem& ms, const VecX& S, const VecX& sigma, const Floors& floors, const FieldOptions& fo) {
  if (fo.mode == GradientMode::FiniteDifference) return kinetic_gradient_fd(ms, S, sigma, fo.fd_step, floors);
  const VecX ad = kinetic_gradient_ad(ms, S, sigma, floors);
  if (fo.mode == GradientMode::CrossCheck) {
    const VecX fd = kinetic_gradient_fd(ms, S, sigma, fo.fd_step, floors);
    if ((fd - ad).norm() > fo.cross_check_tol * std::max(1.0, ad.norm()))
      fail(ErrorKind::Asymmetry, "kinetic gradient cross-check failed");
    const VecX gv = shape_potential_gradient(ms, sigma, floors);
    const VecX gv_fd = potential_gradient_fd(ms, sigma, fo.fd_step, floors);
    if ((gv - gv_fd).norm() > fo.cross_check_tol * std::max(1.0, gv.norm()))
      fail(ErrorKind::Asymmetry, "potential gradient cross-check failed");
  }
  return ad;
}

BlowupState blowup_field(const MassSystem& ms, const BlowupState& bs, const Floors& floors, const FieldOptions& fo) {
  check_blowup(ms, bs);
  const MatX a = shape_metric(ms, bs.sigma, floors);
  const VecX as = a * bs.S;
  const double t = 0.5 * bs.S.dot(as);
  const double v = shape_potential(ms, bs.sigma, floors);
  const VecX gv = shape_potential_gradient(ms, bs.sigma, floors);
  const VecX gt = kinetic_gradient(ms, bs.S, bs.sigma, floors, fo);
  BlowupState d;
  d.chart = bs.chart;
  d.rho = bs.rho * bs.R;
  d.R = bs.R * bs.R / 2.0 + 2.0 * t - v;
  d.S = -gt + gv - bs.R / 2.0 * bs.S;
  d.sigma = as;
  const double nn = shape_norm(ms, bs.sigma);
  const Eigen::Vector4d w = nn * nn * w_rates(ms, bs.S, bs.sigma, bs.u, bs.v, chart_cos(bs.u, bs.v, bs.chart), floors);
  d.u = w[0];
  d.v = w[1];
  d.alpha = w[2];
  return d;
}

double field_norm(const BlowupState& d) {
  return std::sqrt(d.rho * d.rho + d.R * d.R + d.S.squaredNorm() + d.sigma.squaredNorm() + d.u * d.u +
                   d.v * d.v + d.alpha * d.alpha);
}

double rescaled_energy(const MassSystem& ms, const BlowupState& bs, const Floors& floors) {
  check_blowup(ms, bs);
  return bs.R * bs.R / 2.0 + shape_kinetic(ms, bs.S, bs.sigma, floors) - shape_potential(ms, bs.sigma, floors);
}

double energy_residual(const MassSystem& ms, const BlowupState& bs, double h, const Floors& floors) {
  if (!(bs.rho > 0.0)) fail(ErrorKind::Degenerate, "energy residual needs rho > 0");
  return rescaled_energy(ms, bs, floors) - h * bs.rho;
}

VecX pack_blowup(const BlowupState& bs, double L) {
  const Eigen::Index d = bs.S.size();
  VecX y(2 * d + 7);
  y[0] = bs.rho;
  y[1] = bs.R;
  y.segment(2, d) = bs.S;
  y.segment(2 + d, d) = bs.sigma;
  y[2 + 2 * d] = bs.u;
  y[3 + 2 * d] = bs.v;
  y[4 + 2 * d] = chart_cos(bs.u, bs.v, bs.chart);
  y[5 + 2 * d] = bs.alpha;
  y[6 + 2 * d] = L;
  return y;
}

BlowupState unpack_blowup(const VecX& y, int n, int chart_hint) {
  const int d = shape_dim(n);
  BlowupState bs;
  bs.rho = y[0];
  bs.R = y[1];
  bs.S = y.segment(2, d);
  bs.sigma = y.segment(2 + d, d);
  bs.u = y[2 + 2 * d];
  bs.v = y[3 + 2 * d];
  const double c = y[4 + 2 * d];
  bs.chart = c > 0.0 ? +1 : (c < 0.0 ? -1 : chart_hint);
  bs.alpha = y[5 + 2 * d];
  return bs;
}

void blowup_rhs(const MassSystem& ms, const VecX& y, VecX& dy, const Floors& floors, const FieldOptions& fo) {
  const int d = shape_dim(ms.n());
  BlowupState bs = unpack_blowup(y, ms.n());
  const MatX a = shape_metric(ms, bs.sigma, floors);
  const VecX as = a * bs.S;
  const double t = 0.5 * bs.S.dot(as);
  const double v = shape_potential(ms, bs.sigma, floors);
  const VecX gv = shape_potential_gradient(ms, bs.sigma, floors);
  const VecX gt = kinetic_gradient(ms, bs.S, bs.sigma, floors, fo);
  if (fo.project_zero_energy && bs.rho == 0.0) {
    if (!(v - t > 0.0)) fail(ErrorKind::SquareRootDomain, "zero-energy projection needs V > T");
    bs.R = -std::sqrt(2.0 * (v - t));
  }
  dy.resize(y.size());
  dy[0] = bs.rho * bs.R;
  dy[1] = bs.R * bs.R / 2.0 + 2.0 * t - v;
  dy.segment(2, d) = -gt + gv - bs.R / 2.0 * bs.S;
  dy.segment(2 + d, d) = as;
  const double nn = shape_norm(ms, bs.sigma);
  const Eigen::Vector4d w = nn * nn * w_rates(ms, bs.S, bs.sigma, bs.u, bs.v, y[4 + 2 * d], floors);
  dy[2 + 2 * d] = w[0];
  dy[3 + 2 * d] = w[1];
  dy[4 + 2 * d] = w[3];
  dy[5 + 2 * d] = w[2];
  dy[6 + 2 * d] = bs.R;
}

double packed_field_norm(const MassSystem& ms, const VecX& y, const Floors& floors, const FieldOptions& fo) {
  const int d = shape_dim(ms.n());
  VecX dy;
  blowup_rhs(ms, y, dy, floors, fo);
  dy[4 + 2 * d] = 0.0;
  dy[6 + 2 * d] = 0.0;
  return dy.norm();
}

BlowupState Trajectory::at(double t) const { return unpack_blowup(solution.at(t), n); }

double Trajectory::L_at(double t) const {
  const VecX y = solution.at(t);
  return y[y.size() - 1];
}

std::vector<double> Trajectory::physical_time() const {
  std::vector<double> out(tau.size(), 0.0);
  auto w = [](double rho) { return std::pow(std::max(rho, 0.0), 1.5); };
  for (std::size_t k = 1; k < tau.size(); ++k) {
    const double a = tau[k - 1], b = tau[k];
    const double mid = solution.at(0.5 * (a + b))[0];
    out[k] = out[k - 1] + (b - a) / 6.0 * (w(states[k - 1].rho) + 4.0 * w(mid) + w(states[k].rho));
  }
  return out;
}

Trajectory integrate_blowup(const MassSystem& ms, const BlowupState& bs0, double tau0, double tau1,
                            const BlowupOptions& opt, const Floors& floors) {
  check_blowup(ms, bs0);
  const int n = ms.n();
  const int d = shape_dim(n);
  if (bs0.u * bs0.u + bs0.v * bs0.v > 1.0 + 1e-12) fail(ErrorKind::InvalidArgument, "(u, v) outside the closed unit disk");
  auto rhs = [&](double, const VecX& y, VecX& dy) { blowup_rhs(ms, y, dy, floors, opt.field); };
  auto fnorm = [&](const VecX& y) { return packed_field_norm(ms, y, floors, opt.field); };
  std::vector<ode::Event> events;
  // For n = 2 the field has no 1/sigma_{1,2} terms and crosses sigma_{1,2} = 0 smoothly.
  if (n >= 3)
    events.push_back({"sigma_floor", [&, d](double, const VecX& y) { return std::abs(y[2 + d + d - 2]) - floors.xi_n12; },
                      -1, true});
  events.push_back({"chart_seam", [d](double, const VecX& y) { return y[4 + 2 * d]; }, 0, false});
  events.push_back({"equilibrium", [&](double, const VecX& y) { return fnorm(y) - opt.eq_threshold; }, -1,
                    opt.stop_at_equilibrium});
  ode::Options o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_steps = opt.max_steps;
  Trajectory tr;
  tr.n = n;
  tr.solution = ode::integrate(rhs, tau0, pack_blowup(bs0, 0.0), tau1, o, events);
  int chart = bs0.chart;
  for (std::size_t k = 0; k < tr.solution.t.size(); ++k) {
    const VecX& y = tr.solution.y[k];
    BlowupState s = unpack_blowup(y, n, chart);
    chart = s.chart;
    NodeDiagnostics nd;
    nd.T = shape_kinetic(ms, s.S, s.sigma, floors);
    nd.V = shape_potential(ms, s.sigma, floors);
    nd.E = s.R * s.R / 2.0 + nd.T - nd.V;
    nd.L = y[6 + 2 * d];
    const double s2 = s.sigma[d - 2];
    nd.inv_sigma2 = s2 != 0.0 ? std::abs(1.0 / s2) : std::numeric_limits<double>::infinity();
    nd.sigma_ratio = s2 != 0.0 ? std::abs(s.sigma[d - 1] / s2) : std::numeric_limits<double>::infinity();
    nd.field_norm = fnorm(y);
    tr.tau.push_back(tr.solution.t[k]);
    tr.states.push_back(std::move(s));
    tr.diag.push_back(nd);
  }
  if (tau1 < tau0) {
    std::reverse(tr.tau.begin(), tr.tau.end());
    std::reverse(tr.states.begin(), tr.states.end());
    std::reverse(tr.diag.begin(), tr.diag.end());
  }
  return tr;
}

}  // namespace nbcoll
