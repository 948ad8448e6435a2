#include "nbcoll/spin_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nbcoll/errors.hpp"
#include "nbcoll/jacobi.hpp"
#include "nbcoll/so3.hpp"

namespace nbcoll {
namespace {

Vec3 w_vec(const BlowupState& s) { return Vec3(s.u, s.v, s.alpha); }

double operator_norm(const MatX& m) {
  Eigen::JacobiSVD<MatX> svd(m);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) fail(ErrorKind::InsufficientTail, "degenerate fit abscissae");
  return (n * sxy - sx * sy) / den;
}

double angular_momentum_at(const MassSystem& ms, const BlowupState& bs, const Floors& floors) {
  const ShapeState ss = blow_down(bs, floors);
  const FramePair fp = shape_merge(ms, ss, floors);
  RegularizedAngles w{bs.u, bs.v, bs.alpha, bs.chart, 0.0, 0.0, 0.0};
  const AngleBlock ab = deregularize(w, floors);
  ReducedState rs{ab.Phi, ab.Theta, ab.Psi, ab.angles, fp.eta, fp.xi};
  const RelativePairs rp = reconstruct(ms, rs, floors);
  return angular_momentum_jacobi(Vec3::Zero(), Vec3::Zero(), rp.y, rp.x).norm();
}

}  // namespace

Recipe parse_recipe(const std::string& name) {
  if (name == "homothetic") return Recipe::Homothetic;
  if (name == "stable-seed") return Recipe::StableSeed;
  if (name == "user-state") return Recipe::UserState;
  fail(ErrorKind::InvalidArgument, "unknown recipe '" + name + "'");
}

std::string to_string(Recipe r) {
  switch (r) {
    case Recipe::Homothetic: return "homothetic";
    case Recipe::StableSeed: return "stable-seed";
    case Recipe::UserState: return "user-state";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  const MassSystem ms(masses);
  if (!(eps >= 0.0)) fail(ErrorKind::InvalidArgument, "eps must be non-negative");
  if (!(rho0 >= 0.0)) fail(ErrorKind::InvalidArgument, "rho0 must be non-negative");
  if (!(tau_max > 0.0)) fail(ErrorKind::InvalidArgument, "tau_max must be positive");
  if (!(rtol > 0.0) || !(atol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerances must be positive");
  if (!(eq_threshold > 0.0) || !(tail_epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "thresholds must be positive");
  if (recipe != Recipe::UserState && sigma_guess.size() != shape_dim(ms.n()))
    fail(ErrorKind::InvalidArgument, "sigma_guess must have 3n-4 entries");
  if (w0.chart != 1 && w0.chart != -1) fail(ErrorKind::InvalidArgument, "chart must be +1 or -1");
}

BlowupState seed_homothetic(const EquilibriumReport& eq, double rho0, const RegularizedAngles& w0) {
  if (!(rho0 > 0.0)) fail(ErrorKind::InvalidArgument, "rho0 must be positive");
  BlowupState bs;
  bs.rho = rho0;
  bs.R = eq.R;
  bs.S = VecX::Zero(eq.sigma.size());
  bs.sigma = eq.sigma;
  bs.u = w0.u;
  bs.v = w0.v;
  bs.alpha = w0.alpha;
  bs.chart = w0.chart;
  return bs;
}

int slowest_stable_mode(const EquilibriumReport& eq) {
  int best = -1;
  for (std::size_t j = 0; j < eq.spectrum.lambda_minus.size(); ++j) {
    const double re = eq.spectrum.lambda_minus[j].real();
    if (re < 0.0 && (best < 0 || re > eq.spectrum.lambda_minus[best].real())) best = static_cast<int>(j);
  }
  if (best < 0) fail(ErrorKind::NoStableMode, "no shape mode with negative real part");
  return best;
}

BlowupState seed_stable_direction(const MassSystem& ms, const EquilibriumReport& eq, double eps, int mode_index,
                                  const RegularizedAngles& w0, const Floors& floors) {
  const int d = static_cast<int>(eq.sigma.size());
  if (mode_index < 0) mode_index = slowest_stable_mode(eq);
  if (mode_index >= d) fail(ErrorKind::InvalidArgument, "mode index out of range");
  const Complex lam = eq.spectrum.lambda_minus[mode_index];
  if (!(lam.real() < 0.0) || lam.imag() != 0.0) fail(ErrorKind::NoStableMode, "selected mode is not stable");
  VecX s = VecX::Zero(d), w = VecX::Zero(d);
  s[mode_index] = 1.0;
  w[mode_index] = lam.real();
  const MatX ac = eq.spectrum.alpha * eq.spectrum.C;
  const double scale = std::hypot((ac * s).norm(), (ac.inverse().transpose() * w).norm());
  BlowupState bs = restricted_to_blowup(ms, eq, eps / scale * w, eps / scale * s, floors);
  bs.u = w0.u;
  bs.v = w0.v;
  bs.alpha = w0.alpha;
  bs.chart = w0.chart;
  return bs;
}

DescentFit descent_diagnostic(const MassSystem& ms, const Trajectory& tr, const EquilibriumReport& eq, double tau_from,
                              double expected_rate, const Floors& floors) {
  DescentFit fit;
  fit.exponential = eq.spectrum.hyperbolic;
  fit.expected_rate = expected_rate;
  fit.min_W = std::numeric_limits<double>::infinity();
  const double noise = 1e-13 * eq.V;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < tr.tau.size(); ++k) {
    if (tr.tau[k] < tau_from) continue;
    const double W = shape_potential(ms, tr.states[k].sigma, floors) - eq.V;
    if (!fit.W.empty() && W > fit.W.back() + noise) ++fit.monotonicity_violations;
    fit.tau.push_back(tr.tau[k]);
    fit.W.push_back(W);
    fit.min_W = std::min(fit.min_W, W);
    if (W > 1e3 * noise) {
      x.push_back(fit.exponential ? tr.tau[k] : std::log(tr.tau[k] - tau_from + 1.0));
      y.push_back(std::log(W));
    }
  }
  if (x.size() < 5) fail(ErrorKind::InsufficientTail, "fewer than five resolvable samples on the tail");
  fit.rate = -slope(x, y);
  return fit;
}

Experiment run_experiment(const ExperimentConfig& cfg, const Floors& floors) {
  cfg.validate();
  const MassSystem ms(cfg.masses);
  const int n = ms.n();
  const int d = shape_dim(n);
  Experiment ex;
  SpinReport& rep = ex.report;
  rep.recipe = cfg.recipe;
  rep.tail_epsilon = cfg.tail_epsilon;

  BlowupOptions bo;
  bo.rtol = cfg.rtol;
  bo.atol = cfg.atol;
  bo.eq_threshold = cfg.eq_threshold;
  double tau_start = 0.0, tau_stop = cfg.tau_max;
  BlowupState start;
  if (cfg.recipe == Recipe::UserState) {
    start = cfg.user_state;
    if (cfg.sigma_guess.size() == d) rep.equilibrium = find_central_config(ms, cfg.sigma_guess, cfg.newton, floors);
  } else {
    rep.equilibrium = find_central_config(ms, cfg.sigma_guess, cfg.newton, floors);
    if (cfg.recipe == Recipe::Homothetic) {
      start = seed_homothetic(rep.equilibrium, cfg.rho0, cfg.w0);
      rep.seed_lambda = rep.equilibrium.R;
    } else {
      const int mode = cfg.mode_index < 0 ? slowest_stable_mode(rep.equilibrium) : cfg.mode_index;
      rep.seed_lambda = rep.equilibrium.spectrum.lambda_minus[mode].real();
      // The stable manifold is computed backward from its end near the equilibrium.
      start = seed_stable_direction(ms, rep.equilibrium, cfg.eps * std::exp(rep.seed_lambda * cfg.tau_max), mode,
                                    cfg.w0, floors);
      bo.field.project_zero_energy = true;
      std::swap(tau_start, tau_stop);
    }
  }
  ex.trajectory = integrate_blowup(ms, start, tau_start, tau_stop, bo, floors);
  const Trajectory& tr = ex.trajectory;
  rep.floor_hit = tr.solution.stopped_by_event;
  rep.tau_end = tr.tau.back();
  const double tau0 = tr.tau.front();
  for (const auto& e : tr.solution.events)
    if (e.name == "chart_seam") ++rep.seam_crossings;

  // Running non-collinearity sups and the w-rate bound K.
  const std::size_t nodes = tr.tau.size();
  double sup1 = 0.0, sup2 = 0.0;
  const double L0 = tr.diag.front().L;
  const double E0 = tr.diag.front().E;
  for (std::size_t k = 0; k < nodes; ++k) {
    const BlowupState& s = tr.states[k];
    const NodeDiagnostics& nd = tr.diag[k];
    sup1 = std::max(sup1, nd.inv_sigma2);
    sup2 = std::max(sup2, nd.sigma_ratio);
    ex.running_inv_sigma2.push_back(sup1);
    ex.running_sigma_ratio.push_back(sup2);
    const double nn = shape_norm(ms, s.sigma);
    const double c = chart_cos(s.u, s.v, s.chart);
    rep.K = std::max(rep.K, nn * nn * operator_norm(w_rate_matrix(ms, s.sigma, s.u, s.v, c, floors)));
    rep.rho_check = std::max(rep.rho_check, std::abs(s.rho));
    if (bo.field.project_zero_energy) {
      rep.energy_check = std::max(rep.energy_check, std::abs(nd.E));
    } else {
      const double expected = E0 * std::exp(nd.L - L0);
      rep.energy_check = std::max(rep.energy_check, std::abs(nd.E - expected) / std::max(1.0, std::abs(E0)));
    }
    if (s.rho > floors.radius) rep.angular_momentum = std::max(rep.angular_momentum, angular_momentum_at(ms, s, floors));
  }
  rep.sup_inv_sigma2 = sup1;
  rep.sup_sigma_ratio = sup2;
  if (!bo.field.project_zero_energy) rep.rho_check = 0.0;

  // Dyadic base time: first tau with field norm below the proximity threshold.
  std::size_t first = nodes;
  for (std::size_t k = 0; k < nodes; ++k)
    if (tr.diag[k].field_norm < cfg.eq_threshold) {
      first = k;
      break;
    }
  if (first == nodes) fail(ErrorKind::InsufficientTail, "equilibrium proximity never reached");
  if (first == 0) fail(ErrorKind::InsufficientTail, "initial state already within the proximity threshold");
  double lo = tr.tau[first - 1], hi = tr.tau[first];
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (packed_field_norm(ms, tr.solution.at(mid), floors, bo.field) < cfg.eq_threshold ? hi : lo) = mid;
  }
  rep.T = hi - tau0;

  auto s_norm = [](const BlowupState& s) { return s.S.norm(); };
  for (int k = 0; tau0 + std::ldexp(rep.T, k + 1) <= rep.tau_end; ++k) {
    const double a = tau0 + std::ldexp(rep.T, k), b = tau0 + std::ldexp(rep.T, k + 1);
    const double ik = tr.integrate(a, b, s_norm);
    rep.dyadic.push_back(ik);
    if (rep.K > 0.0 && ik > 0.0)
      rep.bound_ratio = std::max(rep.bound_ratio, (w_vec(tr.at(b)) - w_vec(tr.at(a))).norm() / (rep.K * ik));
  }
  if (rep.dyadic.empty()) fail(ErrorKind::InsufficientTail, "no complete dyadic window before tau_end");
  for (std::size_t k = 1; k < rep.dyadic.size(); ++k)
    rep.ratios.push_back(rep.dyadic[k - 1] > 0.0 ? rep.dyadic[k] / rep.dyadic[k - 1] : 0.0);

  const std::size_t k0 = rep.dyadic.size() - 1;
  rep.tail_start = tau0 + std::ldexp(rep.T, static_cast<int>(k0));
  const double q = rep.ratios.empty() ? 0.0 : rep.ratios.back();
  const double last = rep.dyadic[k0];
  const double measured = tr.integrate(rep.tail_start, rep.tau_end, s_norm);
  const double remainder = last == 0.0 ? 0.0 : (q < 1.0 ? last * q / (1.0 - q) : std::numeric_limits<double>::infinity());
  rep.tail_bound = rep.K * (measured + remainder);
  rep.converged = rep.tail_bound < cfg.tail_epsilon;
  rep.w_limit = w_vec(tr.states.back());
  for (std::size_t k = 0; k < nodes; ++k)
    if (tr.tau[k] >= rep.tail_start)
      rep.cauchy_tail = std::max(rep.cauchy_tail, (w_vec(tr.states[k]) - rep.w_limit).norm());

  if (cfg.recipe != Recipe::Homothetic && rep.equilibrium.sigma.size() == d) {
    try {
      rep.descent = descent_diagnostic(ms, tr, rep.equilibrium, tau0 + rep.T, 2.0 * std::abs(rep.seed_lambda), floors);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientTail) throw;
    }
  }
  return ex;
}

}  // namespace nbcoll
