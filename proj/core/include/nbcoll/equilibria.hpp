#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nbcoll/blowup.hpp"
#include "nbcoll/types.hpp"

namespace nbcoll {

using Complex = std::complex<double>;

struct Spectrum {
  MatX alpha;                   // symmetric positive-definite square root of A
  MatX C;                       // orthogonal, C^T alpha B alpha C = diag(c)
  VecX c;                       // ascending
  std::vector<Complex> lambda_plus;
  std::vector<Complex> lambda_minus;
  int center_dim = 0;
  bool hyperbolic = true;
  double zero_threshold = 1e-7;  // relative to the spectral norm of alpha B alpha
};

struct EquilibriumReport {
  VecX sigma;
  double V = 0.0;
  double R = 0.0;  // equilibrium value of the rescaled radial momentum, -sqrt(2 V)
  double grad_norm = 0.0;
  int iterations = 0;
  bool chart_boundary = false;  // sigma_{n-1,2} = 0: collinear, moving frame undefined
  int dimension = 0;            // 3n - 4
  MatX A;
  MatX B;
  double b_asymmetry = 0.0;   // relative, before symmetrization
  double b_richardson = 0.0;  // relative change between step h and 2h
  Spectrum spectrum;
};

// Equilibrium radial momentum on the collision manifold.
double equilibrium_radial(double V);

// Flips every second component; V is invariant.
VecX reflect_shape(const VecX& sigma, int n);

struct NewtonOptions {
  double tol = 1e-11;
  int max_iter = 100;
  double hessian_step = 1e-4;
  double zero_threshold = 1e-7;
};

// Damped Newton on dV/dsigma with backtracking on |dV|^2, followed by
// linearize and classify.
EquilibriumReport find_central_config(const MassSystem& ms, const VecX& sigma_guess, const NewtonOptions& opt = {},
                                      const Floors& floors = {});

// Jacobian of the analytic gradient by fourth-order central differences.
MatX potential_hessian(const MassSystem& ms, const VecX& sigma, double step, const Floors& floors = {});

struct Linearization {
  MatX A;
  MatX B;
  double asymmetry = 0.0;
  double richardson = 0.0;
};
Linearization linearize(const MassSystem& ms, const VecX& sigma_star, double step = 1e-4,
                        const Floors& floors = {});

// lambda = -R/4 +- sqrt(R^2 + factor * c)/4; the linearization gives factor 16.
std::pair<Complex, Complex> mode_eigenvalues(double R, double c, double factor = 16.0);
Spectrum classify(double R, const MatX& A, const MatX& B, double zero_threshold = 1e-7);
// Eigenvalues of the (S, sigma) block [[-R/2 I, B], [A, 0]].
std::vector<Complex> block_eigenvalues(double R, const MatX& A, const MatX& B);
// Largest distance from each target to its greedily matched reference.
double match_eigenvalues(std::vector<Complex> reference, const std::vector<Complex>& target);

// Displacement from an equilibrium in (rho, R, S, sigma); w is ignored.
struct Displacement {
  double rho = 0.0;
  double R = 0.0;
  VecX S;
  VecX sigma;
};
Displacement linearized_flow(const EquilibriumReport& eq, const Displacement& d0, double tau);

// Flow on {rho = 0, E = 0} in s = C^T alpha^{-1}(sigma - sigma*), w = C^T alpha S.
struct RestrictedRates {
  VecX w;
  VecX s;
};
RestrictedRates restricted_center_flow(const MassSystem& ms, const EquilibriumReport& eq, const VecX& w, const VecX& s,
                                       double fd_step = 1e-4, const Floors& floors = {});
// Maps (w, s) to the blow-up state on {rho = 0, E = 0}.
BlowupState restricted_to_blowup(const MassSystem& ms, const EquilibriumReport& eq, const VecX& w, const VecX& s,
                                 const Floors& floors = {});

struct SurveyOptions {
  int restarts = 64;
  std::uint64_t seed = 1;
  double cluster_tol = 1e-6;
  double box = 2.0;
  NewtonOptions newton;
};
// Random-restart search; distinct critical points up to reflection.
std::vector<EquilibriumReport> survey(const MassSystem& ms, const SurveyOptions& opt = {}, const Floors& floors = {});

// Pushforward of the three infinitesimal rotations of the configuration
// through the shape chart, with the relative size of B v for each.
struct RotationGeneratorTest {
  std::vector<VecX> tangents;
  std::vector<double> tangent_norms;
  std::vector<double> b_residuals;
  int certified_center_directions = 0;
};
RotationGeneratorTest rotation_generator_test(const MassSystem& ms, const EquilibriumReport& eq,
                                              double step = 1e-6, const Floors& floors = {});

}  // namespace nbcoll
