#pragma once

#include <string>
#include <vector>

#include "nbcoll/blowup.hpp"
#include "nbcoll/equilibria.hpp"
#include "nbcoll/regularization.hpp"

namespace nbcoll {

enum class Recipe { Homothetic, StableSeed, UserState };
Recipe parse_recipe(const std::string& name);
std::string to_string(Recipe r);

struct ExperimentConfig {
  std::vector<double> masses;
  Recipe recipe = Recipe::StableSeed;
  VecX sigma_guess;           // central-configuration seed
  double rho0 = 1.0;          // homothetic radius
  double eps = 1e-3;          // stable-seed distance from the equilibrium at tau = 0
  int mode_index = -1;        // -1 selects the slowest stable mode
  double tau_max = 13.0;
  double rtol = 1e-12;
  double atol = 1e-12;
  double eq_threshold = 1e-8;  // field norm defining the dyadic base time T
  double tail_epsilon = 1e-6;  // radians
  RegularizedAngles w0{0.3, 0.2, 0.1, +1};
  BlowupState user_state;
  NewtonOptions newton;
  void validate() const;
};

struct DescentFit {
  std::vector<double> tau;
  std::vector<double> W;  // V(sigma) - V(sigma*)
  bool exponential = true;
  double rate = 0.0;      // fitted decay rate (exponential) or exponent (power law)
  double expected_rate = 0.0;
  double min_W = 0.0;
  int monotonicity_violations = 0;
};

struct SpinReport {
  Recipe recipe = Recipe::StableSeed;
  EquilibriumReport equilibrium;
  double seed_lambda = 0.0;
  double tau_end = 0.0;
  bool floor_hit = false;
  double T = 0.0;
  std::vector<double> dyadic;  // I_k = int_{2^k T}^{2^{k+1} T} |S| dtau
  std::vector<double> ratios;  // I_{k+1}/I_k
  double K = 0.0;              // sup of the operator norm of S -> w'
  Vec3 w_limit = Vec3::Zero();  // (u, v, alpha) at tau_end
  double cauchy_tail = 0.0;     // sup_{tau >= 2^{k0} T} |w(tau) - w(tau_end)|
  double tail_bound = 0.0;      // K (int_{2^{k0} T}^{tau_end} |S| + geometric remainder)
  double tail_start = 0.0;      // 2^{k0} T
  bool converged = false;
  double tail_epsilon = 1e-6;
  double bound_ratio = 0.0;     // max |w(b) - w(a)| / (K int_a^b |S|) over dyadic windows
  double sup_inv_sigma2 = 0.0;
  double sup_sigma_ratio = 0.0;
  double energy_check = 0.0;
  double rho_check = 0.0;       // max rho for collision-manifold seeds
  double angular_momentum = 0.0;  // max |C| through the inverse charts, rho > 0 nodes
  int seam_crossings = 0;
  DescentFit descent;
};

struct Experiment {
  SpinReport report;
  Trajectory trajectory;
  std::vector<double> running_inv_sigma2;
  std::vector<double> running_sigma_ratio;
};

// (rho0, R*, 0, sigma*) with the given angles: exact homothetic collision.
BlowupState seed_homothetic(const EquilibriumReport& eq, double rho0, const RegularizedAngles& w0 = {});
// Index of the slowest stable mode, or NoStableMode.
int slowest_stable_mode(const EquilibriumReport& eq);
// Equilibrium displaced by eps along the stable eigenvector of a mode, on {rho = 0, E = 0}.
BlowupState seed_stable_direction(const MassSystem& ms, const EquilibriumReport& eq, double eps, int mode_index,
                                  const RegularizedAngles& w0 = {}, const Floors& floors = {});

Experiment run_experiment(const ExperimentConfig& cfg, const Floors& floors = {});

DescentFit descent_diagnostic(const MassSystem& ms, const Trajectory& tr, const EquilibriumReport& eq, double tau_from,
                              double expected_rate, const Floors& floors = {});

}  // namespace nbcoll
