#pragma once

#include <string>
#include <vector>

#include "nbcoll/ode.hpp"
#include "nbcoll/regularization.hpp"
#include "nbcoll/shape.hpp"
#include "nbcoll/types.hpp"

namespace nbcoll {

// Rescaled variables: R = Rt/sqrt(rho), S = St sqrt(rho), d/dtau = rho^{3/2} d/dt.
// (u, v, alpha, chart) ride along; rho = 0 is the collision manifold.
struct BlowupState {
  double rho = 0.0;
  double R = 0.0;
  VecX S;
  VecX sigma;
  double u = 0.0;
  double v = 0.0;
  double alpha = 0.0;
  int chart = +1;
};

BlowupState blow_up(const ShapeState& ss, const RegularizedAngles& w = {});
ShapeState blow_down(const BlowupState& bs, const Floors& floors = {});

// dV/dsigma is always analytic; the modes select how dT/dsigma is formed.
enum class GradientMode {
  FiniteDifference,  // fourth-order central differences
  AutoDiff,          // forward-mode automatic differentiation
  CrossCheck,        // both, compared to cross_check_tol; also checks dV against differences; uses AutoDiff
};

struct FieldOptions {
  GradientMode mode = GradientMode::FiniteDifference;
  double fd_step = 1e-3;
  double cross_check_tol = 1e-6;
  // On rho = 0, evaluate with Rt = -sqrt(2(V - T)) so that E = 0 is enforced.
  bool project_zero_energy = false;
};

double kinetic_T(const MassSystem& ms, const VecX& S, const VecX& sigma, const Floors& floors = {});
double potential_V(const MassSystem& ms, const VecX& sigma, const Floors& floors = {});
// d/dsigma T(S, sigma) by fourth-order central differences.
VecX kinetic_gradient_fd(const MassSystem& ms, const VecX& S, const VecX& sigma, double step,
                         const Floors& floors = {});
// d/dsigma T(S, sigma) by forward-mode automatic differentiation.
VecX kinetic_gradient_ad(const MassSystem& ms, const VecX& S, const VecX& sigma, const Floors& floors = {});
VecX potential_gradient_fd(const MassSystem& ms, const VecX& sigma, double step, const Floors& floors = {});
// d/dsigma T as selected by fo.mode.
VecX kinetic_gradient(const MassSystem& ms, const VecX& S, const VecX& sigma, const Floors& floors = {},
                      const FieldOptions& fo = {});

// Derivative of every field of bs with respect to tau; the chart slot is copied.
BlowupState blowup_field(const MassSystem& ms, const BlowupState& bs, const Floors& floors = {},
                         const FieldOptions& fo = {});
double field_norm(const BlowupState& d);
// Norm of the packed field without the auxiliary cos(theta) and L slots.
double packed_field_norm(const MassSystem& ms, const VecX& y, const Floors& floors = {}, const FieldOptions& fo = {});

// E = Rt^2/2 + T - V; along flows E(tau) = E(0) exp(int Rt).
double rescaled_energy(const MassSystem& ms, const BlowupState& bs, const Floors& floors = {});
double energy_residual(const MassSystem& ms, const BlowupState& bs, double h, const Floors& floors = {});

// Packed integration vector: rho, Rt, St, sigma, u, v, c = cos(theta), alpha, L = int Rt.
VecX pack_blowup(const BlowupState& bs, double L = 0.0);
BlowupState unpack_blowup(const VecX& y, int n, int chart_hint = +1);
void blowup_rhs(const MassSystem& ms, const VecX& y, VecX& dy, const Floors& floors = {},
                const FieldOptions& fo = {});

struct NodeDiagnostics {
  double T = 0.0;
  double V = 0.0;
  double E = 0.0;
  double L = 0.0;              // int_0^tau Rt
  double inv_sigma2 = 0.0;     // |1/sigma_{n-1,2}|
  double sigma_ratio = 0.0;    // |sigma_{n-1,3}/sigma_{n-1,2}|
  double field_norm = 0.0;
};

struct BlowupOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double eq_threshold = 1e-8;
  bool stop_at_equilibrium = false;
  long max_steps = 200'000;
  FieldOptions field;
};

struct Trajectory {
  int n = 0;
  std::vector<double> tau;
  std::vector<BlowupState> states;
  std::vector<NodeDiagnostics> diag;
  ode::Solution solution;

  BlowupState at(double t) const;
  double L_at(double t) const;
  const ode::EventHit* event(const std::string& name) const { return solution.first_event(name); }
  // Physical time t(tau) = int rho^{3/2} dtau by per-step Simpson quadrature.
  std::vector<double> physical_time() const;
  // int_a^b f(state) dtau by per-step Gauss-Legendre quadrature on the dense output.
  template <class F>
  double integrate(double a, double b, F&& f) const;
};

// Events: "sigma_floor" (terminal), "chart_seam", "equilibrium" (terminal on request).
// tau1 < tau0 integrates backward; the node arrays are still returned in increasing tau.
Trajectory integrate_blowup(const MassSystem& ms, const BlowupState& bs0, double tau0, double tau1,
                            const BlowupOptions& opt = {}, const Floors& floors = {});

template <class F>
double Trajectory::integrate(double a, double b, F&& f) const {
  static constexpr double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                  0.9061798459386640};
  static constexpr double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                  0.4786286704993665, 0.2369268850561891};
  if (b < a) return -integrate(b, a, f);
  double total = 0.0;
  for (const auto& seg : solution.segments) {
    const double s0 = std::min(seg.t0, seg.t0 + seg.h), s1 = std::max(seg.t0, seg.t0 + seg.h);
    const double lo = std::max(a, s0), hi = std::min(b, s1);
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int k = 0; k < 5; ++k) {
      const double t = mid + half * x[k];
      total += half * w[k] * f(unpack_blowup(seg.eval(t), n));
    }
  }
  return total;
}

}  // namespace nbcoll
