#include "nbcoll/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include "nbcoll/blowup.hpp"
#include "nbcoll/equilibria.hpp"
#include "nbcoll/errors.hpp"
#include "nbcoll/jacobi.hpp"
#include "nbcoll/pipeline.hpp"
#include "nbcoll/regularization.hpp"
#include "nbcoll/shape.hpp"
#include "nbcoll/so3.hpp"
#include "nbcoll/spin_lab.hpp"

namespace nbcoll {
namespace {

using Rng = std::mt19937_64;

Check below(std::string name, double value, double threshold, bool required = true) {
  return {std::move(name), std::isfinite(value) && value < threshold, value, threshold, required};
}

Check at_least(std::string name, double value, double threshold, bool required = true) {
  return {std::move(name), std::isfinite(value) && value >= threshold, value, threshold, required};
}

double normal(Rng& rng) { return std::normal_distribution<double>()(rng); }
double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

Vec3 random_vec(Rng& rng) { return Vec3(normal(rng), normal(rng), normal(rng)); }

MassSystem random_masses(Rng& rng, int bodies) {
  std::vector<double> m;
  for (int i = 0; i < bodies; ++i) m.push_back(uniform(rng, 0.5, 2.0));
  return MassSystem(m);
}

VecX flatten(const Vec3List& v) {
  VecX out(3 * static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out.segment<3>(3 * static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

Vec3List unflatten(const VecX& z, Eigen::Index offset, int count) {
  Vec3List out(count);
  for (int i = 0; i < count; ++i) out[i] = z.segment<3>(offset + 3 * i);
  return out;
}

CartesianState random_state(const MassSystem& ms, Rng& rng) {
  for (;;) {
    CartesianState s;
    for (int i = 0; i < ms.bodies(); ++i) {
      s.q.push_back(random_vec(rng));
      s.p.push_back(random_vec(rng));
    }
    if (min_separation(s.q) > 0.3) return s;
  }
}

// Removes total momentum and angular momentum about the barycenter.
CartesianState zero_momentum_state(const MassSystem& ms, Rng& rng) {
  CartesianState s = random_state(ms, rng);
  const Vec3 b = center_of_mass(ms, s.q);
  const Vec3 p = total_momentum(s);
  Mat3 inertia = Mat3::Zero();
  Vec3 l = Vec3::Zero();
  for (int i = 0; i < ms.bodies(); ++i) {
    s.p[i] -= ms.m(i + 1) / ms.total() * p;
    const Vec3 r = s.q[i] - b;
    inertia += ms.m(i + 1) * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
    l += r.cross(s.p[i]);
  }
  const Vec3 omega = inertia.ldlt().solve(l);
  for (int i = 0; i < ms.bodies(); ++i) s.p[i] -= ms.m(i + 1) * omega.cross(s.q[i] - b);
  return s;
}

bool admissible_frame(const Vec3List& x, const Floors& floors) {
  const int n = static_cast<int>(x.size());
  const Vec3 a = x[n - 2], b = x[n - 1];
  if (a.cross(b).norm() < 0.2 * a.norm() * b.norm()) return false;
  try {
    const Frame f = moving_frame(a, b, floors);
    const EulerTriple t = euler_angles(f.matrix(), floors);
    return std::sin(t.theta) > 0.2 && std::abs(t.phi) < M_PI - 0.2 && std::abs(t.psi) < M_PI - 0.2;
  } catch (const Error&) {
    return false;
  }
}


template <class Body>
CriterionResult timed(int id, std::string title, Body&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  try {
    body(r.checks);
  } catch (const std::exception& e) {
    r.checks.push_back({std::string("exception: ") + e.what(), false, 0.0, 0.0, true});
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

EquilibriumReport lagrange(const MassSystem& ms) { return find_central_config(ms, lagrange_seed()); }
EquilibriumReport euler(const MassSystem& ms) { return find_central_config(ms, euler_seed()); }
EquilibriumReport tetrahedral(const MassSystem& ms) {
  return find_central_config(ms, configuration_shape(ms, tetrahedron()));
}

std::vector<Complex> formula_eigenvalues(const EquilibriumReport& eq, double factor) {
  std::vector<Complex> out;
  for (Eigen::Index j = 0; j < eq.spectrum.c.size(); ++j) {
    const auto [lp, lm] = mode_eigenvalues(eq.R, eq.spectrum.c[j], factor);
    out.push_back(lp);
    out.push_back(lm);
  }
  return out;
}

// ---------------------------------------------------------------------------

void symplecticity(std::vector<Check>& out, const SuiteOptions& opt) {
  Rng rng(opt.seed + 1);
  const Floors floors;
  double jac = 0.0, so3 = 0.0, shp = 0.0, reg_plus = 0.0, reg_minus = 0.0;
  for (int k = 0; k < opt.samples; ++k) {
    const int n = 2 + k % 2;
    const MassSystem ms = random_masses(rng, n + 1);
    // Jacobi coordinates: (q, p) -> (x, B; y, P).
    {
      const CartesianState s = random_state(ms, rng);
      VecX z(6 * (n + 1));
      z << flatten(s.q), flatten(s.p);
      auto map = [&](const VecX& w) {
        CartesianState c{unflatten(w, 3 * (n + 1), n + 1), unflatten(w, 0, n + 1)};
        const JacobiState js = to_jacobi(ms, c);
        Vec3List pos = js.x, mom = js.y;
        pos.push_back(js.B);
        mom.push_back(js.P);
        VecX o(z.size());
        o << flatten(pos), flatten(mom);
        return o;
      };
      jac = std::max(jac, symplectic_defect(map, z));
    }
    // Rotation reduction: (x; y) -> (phi, theta, psi, xi; Phi, Theta, Psi, eta).
    {
      Vec3List x(n), y(n);
      do {
        for (int i = 0; i < n; ++i) x[i] = random_vec(rng);
      } while (!admissible_frame(x, floors));
      for (int i = 0; i < n; ++i) y[i] = random_vec(rng);
      VecX z(6 * n);
      z << flatten(x), flatten(y);
      auto map = [&](const VecX& w) {
        const ReducedState rs = reduce(ms, unflatten(w, 3 * n, n), unflatten(w, 0, n), floors);
        VecX o(6 * n);
        o << rs.angles.phi, rs.angles.theta, rs.angles.psi, rs.xi, rs.Phi, rs.Theta, rs.Psi, rs.eta;
        return o;
      };
      so3 = std::max(so3, symplectic_defect(map, z));
    }
    // Shape split: (xi; eta) -> (sigma, rho; S, R).
    {
      const int f = frame_dim(n);
      VecX xi(f), eta(f);
      for (int i = 0; i < f; ++i) {
        xi[i] = normal(rng);
        eta[i] = normal(rng);
      }
      xi[f - 1] = 0.5 + std::abs(xi[f - 1]);
      VecX z(2 * f);
      z << xi, eta;
      auto map = [&](const VecX& w) {
        const ShapeState ss = shape_split(ms, w.tail(f), w.head(f), floors);
        VecX o(2 * f);
        o << ss.sigma, ss.rho, ss.S, ss.R;
        return o;
      };
      shp = std::max(shp, symplectic_defect(map, z));
    }
    // Regularized angles on both charts: (phi, theta, psi; Phi, Theta, Psi) -> (u, v, alpha; U, V, A).
    for (int chart : {+1, -1}) {
      const double theta = chart > 0 ? uniform(rng, 0.15, M_PI / 2 - 0.15) : uniform(rng, M_PI / 2 + 0.15, M_PI - 0.15);
      VecX z(6);
      z << uniform(rng, -3.0, 3.0), theta, uniform(rng, -3.0, 3.0), normal(rng), normal(rng), normal(rng);
      auto map = [&](const VecX& w) {
        const RegularizedAngles r = regularize(w[3], w[4], w[5], EulerTriple{w[0], w[1], w[2]}, floors);
        VecX o(6);
        o << r.u, r.v, r.alpha, r.U, r.V, r.A;
        return o;
      };
      (chart > 0 ? reg_plus : reg_minus) = std::max(chart > 0 ? reg_plus : reg_minus, symplectic_defect(map, z));
    }
  }
  out.push_back(below("jacobi", jac, 1e-8));
  out.push_back(below("rotation reduction", so3, 1e-8));
  out.push_back(below("shape split", shp, 1e-8));
  out.push_back(below("regularization, theta < pi/2", reg_plus, 1e-8));
  out.push_back(below("regularization, theta > pi/2", reg_minus, 1e-8));
}

void chart_equivalence(std::vector<Check>& out, const SuiteOptions& opt) {
  Rng rng(opt.seed + 2);
  double jac = 0.0, so3 = 0.0, shp = 0.0, inv_so3 = 0.0, inv_shape = 0.0;
  for (int k = 0; k < opt.samples; ++k) {
    const int n = 2 + k % 2;
    const MassSystem ms = random_masses(rng, n + 1);
    const ChartDump d = chart_dump(ms, random_state(ms, rng));
    const double scale = std::max(1.0, std::abs(d.H_cartesian));
    jac = std::max(jac, std::abs(d.H_jacobi - d.H_cartesian) / scale);
    so3 = std::max(so3, std::abs(d.H_so3 - d.H_cartesian) / scale);
    shp = std::max(shp, std::abs(d.H_shape - d.H_cartesian) / scale);

    const ChartDump z = chart_dump(ms, zero_momentum_state(ms, rng));
    ReducedState rs = z.reduced;
    rs.Phi = rs.Theta = rs.Psi = 0.0;
    const double h0 = hamiltonian_so3(ms, rs);
    const double hs0 = hamiltonian_shape(ms, z.shape, AngleBlock{});
    for (int t = 0; t < 5; ++t) {
      rs.angles = EulerTriple{uniform(rng, -M_PI, M_PI), uniform(rng, 0.0, M_PI), uniform(rng, -M_PI, M_PI)};
      inv_so3 = std::max(inv_so3, std::abs(hamiltonian_so3(ms, rs) - h0) / std::max(1.0, std::abs(h0)));
      AngleBlock ab;
      ab.angles = rs.angles;
      inv_shape = std::max(inv_shape, std::abs(hamiltonian_shape(ms, z.shape, ab) - hs0) / std::max(1.0, std::abs(hs0)));
    }
  }
  out.push_back(below("cartesian vs jacobi", jac, 1e-10));
  out.push_back(below("cartesian vs rotation-reduced", so3, 1e-10));
  out.push_back(below("cartesian vs shape", shp, 1e-10));
  out.push_back(below("Euler-triple replacement, reduced chart", inv_so3, 1e-10));
  out.push_back(below("Euler-triple replacement, shape chart", inv_shape, 1e-10));
}

void angular_momentum(std::vector<Check>& out, const SuiteOptions& opt) {
  Rng rng(opt.seed + 3);
  double match = 0.0, comps = 0.0, reg = 0.0;
  for (int k = 0; k < opt.samples; ++k) {
    const int n = 2 + k % 2;
    const MassSystem ms = random_masses(rng, n + 1);
    const ChartDump d = chart_dump(ms, random_state(ms, rng));
    match = std::max(match, (d.L_jacobi - d.L_cartesian).norm() / std::max(1.0, d.L_cartesian.norm()));
    const ChartDump z = chart_dump(ms, zero_momentum_state(ms, rng));
    comps = std::max({comps, std::abs(z.reduced.Phi), std::abs(z.reduced.Theta), std::abs(z.reduced.Psi)});
    reg = std::max({reg, std::abs(z.angles.U), std::abs(z.angles.V), std::abs(z.angles.A)});
  }
  out.push_back(below("cartesian vs jacobi angular momentum", match, 1e-12));
  out.push_back(below("zero angular momentum: Phi, Theta, Psi", comps, 1e-12));
  out.push_back(below("zero angular momentum: U, V, A", reg, 1e-12));
}

double energy_drift(const Trajectory& tr) {
  const double e0 = tr.diag.front().E;
  double worst = 0.0;
  for (const auto& nd : tr.diag) worst = std::max(worst, std::abs(nd.E - e0 * std::exp(nd.L - tr.diag.front().L)) / std::abs(e0));
  return worst;
}

// Trajectory on the stable manifold of an equilibrium with E != 0 and rho > 0,
// computed backward from tau_end where it is within e^{lambda tau_end} of the equilibrium.
Trajectory stable_manifold_trajectory(const MassSystem& ms, const EquilibriumReport& eq, double rho, double dR,
                                      double shape, double tau_end, const BlowupOptions& bo) {
  const int mode = slowest_stable_mode(eq);
  const double lam = eq.spectrum.lambda_minus[mode].real();
  BlowupState end = seed_stable_direction(ms, eq, shape * std::exp(lam * tau_end), mode, {0.3, 0.2, 0.1, +1});
  end.rho = rho * std::exp(eq.R * tau_end);
  end.R += dR * std::exp(eq.R * tau_end);
  return integrate_blowup(ms, end, tau_end, 0.0, bo);
}

// Bound binary with a retrograde light outer body, rigidly rotated so L = 0 and tilted off the chart axes.
BlowupState hierarchical_triple(const MassSystem& ms) {
  const double m3 = ms.m(3), a_out = 3.2, v_out = std::sqrt(ms.total() / a_out);
  CartesianState s;
  s.q = {Vec3(0.5, 0.0, 0.0), Vec3(-0.5, 0.0, 0.0), Vec3(0.0, a_out, 0.0)};
  s.p = {Vec3(0.0, std::sqrt(0.5), 0.0), Vec3(0.0, -std::sqrt(0.5), 0.0), Vec3(m3 * v_out, 0.0, 0.0)};
  const Vec3 com = center_of_mass(ms, s.q), P = total_momentum(s);
  Mat3 inertia = Mat3::Zero();
  Vec3 L = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    s.p[i] -= ms.m(i + 1) * P / ms.total();
    const Vec3 r = s.q[i] - com;
    inertia += ms.m(i + 1) * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
    L += r.cross(s.p[i]);
  }
  const Vec3 omega = inertia.ldlt().solve(L);
  const Mat3 tilt = Eigen::AngleAxisd(0.5, Vec3(1.0, 0.3, 0.0).normalized()).toRotationMatrix();
  for (int i = 0; i < 3; ++i) {
    s.p[i] = tilt * (s.p[i] - ms.m(i + 1) * omega.cross(s.q[i] - com));
    s.q[i] = tilt * s.q[i];
  }
  const ChartDump dump = chart_dump(ms, s);
  return blow_up(dump.shape, dump.angles);
}

void conservation(std::vector<Check>& out, const SuiteOptions&) {
  BlowupOptions bo;
  bo.rtol = 1e-10;
  bo.atol = 1e-10;
  {
    const MassSystem ms({1.0, 1.0, 0.3});
    const BlowupState s0 = hierarchical_triple(ms);
    const Trajectory tr = integrate_blowup(ms, s0, 0.0, 50.0, bo);
    out.push_back(below("energy relation drift, hierarchical triple, n = 2", energy_drift(tr), 1e-7));
    out.push_back(below("covers tau in [0, 50], n = 2", std::abs(tr.tau.back() - 50.0), 1e-12));
    out.push_back(at_least("nonzero energy, n = 2", std::abs(tr.diag.front().E), 1e-3));
    BlowupState flat0 = s0;
    flat0.rho = 0.0;
    const Trajectory flat = integrate_blowup(ms, flat0, 0.0, 50.0, bo);
    double worst = 0.0;
    for (const auto& s : flat.states) worst = std::max(worst, std::abs(s.rho));
    out.push_back(below("rho = 0 invariance over tau in [0, 50], n = 2", worst, std::numeric_limits<double>::min()));
    out.push_back(below("covers tau in [0, 50] on rho = 0, n = 2", std::abs(flat.tau.back() - 50.0), 1e-12));
  }
  // Four-body data near the collision manifold leave every equilibrium along unstable shape modes;
  // the longest reliable window is the backward stable-manifold arc.
  {
    const MassSystem four({1.0, 1.0, 1.0, 1.0});
    const EquilibriumReport eq = tetrahedral(four);
    // The kinetic term is not polynomial in sigma for n = 3, so finite differences would bias E'.
    bo.field.mode = GradientMode::AutoDiff;
    const Trajectory tr = stable_manifold_trajectory(four, eq, 0.5, 0.3, 0.05, 10.0, bo);
    out.push_back(below("energy relation drift, stable manifold, tau in [0, 10], n = 3", energy_drift(tr), 1e-7,
                        false));
    const Trajectory flat = stable_manifold_trajectory(four, eq, 0.0, 0.3, 0.05, 10.0, bo);
    double worst = 0.0;
    for (const auto& s : flat.states) worst = std::max(worst, std::abs(s.rho));
    out.push_back(below("rho = 0 invariance, tau in [0, 10], n = 3", worst, std::numeric_limits<double>::min(), false));
  }
}

void central_configurations(std::vector<Check>& out, const SuiteOptions&) {
  const MassSystem ms({1.0, 1.0, 1.0});
  const EquilibriumReport l = find_central_config(ms, lagrange_seed());
  const EquilibriumReport e = find_central_config(ms, euler_seed());
  Eigen::Vector2d lag(-2.0 / std::sqrt(3.0), 0.0);
  out.push_back(below("equilateral: gradient norm", l.grad_norm, 1e-10));
  out.push_back(below("equilateral: distance to the equilateral shape", (l.sigma - lag).norm(), 1e-8));
  out.push_back(below("collinear: gradient norm", e.grad_norm, 1e-10));
  out.push_back(below("collinear: distance to the collinear shape",
                      std::min((e.sigma - Eigen::Vector2d(0.0, 2.0 / 3.0)).norm(),
                               (e.sigma - Eigen::Vector2d(0.0, -2.0 / 3.0)).norm()),
                      1e-8));
  for (const auto& [label, eq] : {std::pair{"equilateral", l}, std::pair{"collinear", e}}) {
    BlowupState bs;
    bs.rho = 0.0;
    bs.S = VecX::Zero(2);
    bs.sigma = eq.sigma;
    bs.u = 0.3;
    bs.v = 0.2;
    bs.R = -std::sqrt(eq.V);
    out.push_back(below(std::string(label) + ": field at Rt = -sqrt(V)", field_norm(blowup_field(ms, bs)), 1e-9));
    bs.R = -std::sqrt(2.0 * eq.V);
    out.push_back(below(std::string(label) + ": field at Rt = -sqrt(2V)", field_norm(blowup_field(ms, bs)), 1e-9, false));
  }
}

void spectral(std::vector<Check>& out, const SuiteOptions&) {
  const MassSystem ms({1.0, 1.0, 1.0});
  const MassSystem four({1.0, 1.0, 1.0, 1.0});
  const EquilibriumReport l = lagrange(ms);
  for (const auto& [label, eq] : {std::pair{"equilateral", l}, std::pair{"collinear", euler(ms)},
                                  std::pair{"tetrahedral", tetrahedral(four)}}) {
    const auto direct = block_eigenvalues(eq.R, eq.A, eq.B);
    out.push_back(below(std::string(label) + ": lambda with R^2 + 8c vs eigendecomposition",
                        match_eigenvalues(formula_eigenvalues(eq, 8.0), direct), 1e-9));
    out.push_back(below(std::string(label) + ": lambda with R^2 + 16c vs eigendecomposition",
                        match_eigenvalues(formula_eigenvalues(eq, 16.0), direct), 1e-9, false));
  }
  for (double factor : {8.0, 16.0}) {
    const auto [lp, lm] = mode_eigenvalues(l.R, 0.0, factor);
    const double err = std::max(std::abs(lp - Complex(-l.R / 2.0, 0.0)), std::abs(lm));
    out.push_back(below("c = 0 gives (-R/2, 0) exactly, factor " + std::to_string(static_cast<int>(factor)), err,
                        std::numeric_limits<double>::min()));
  }
  {
    const double c = -l.R * l.R / 16.0 - 1.0;
    const auto [lp, lm] = mode_eigenvalues(l.R, c);
    const double err = std::max(std::abs(lp.real() + l.R / 4.0), std::abs(lm.real() + l.R / 4.0));
    out.push_back(below("complex pair below the discriminant has real part -R/4", err, 1e-15, false));
  }
  out.push_back(at_least("equilateral: center_dim", l.spectrum.center_dim, 1.0));
  const RotationGeneratorTest rg = rotation_generator_test(ms, l);
  double tn = 0.0;
  for (double v : rg.tangent_norms) tn = std::max(tn, v);
  out.push_back(below("equilateral: rotation generators vanish in the reduced chart", tn, 1e-8, false));
  out.push_back(at_least("equilateral: certified rotation directions", rg.certified_center_directions, 1.0));
}

void homothetic(std::vector<Check>& out, const SuiteOptions&) {
  const MassSystem three({1.0, 1.0, 1.0});
  const MassSystem four({1.0, 1.0, 1.0, 1.0});
  BlowupOptions bo;
  bo.rtol = 1e-12;
  bo.atol = 1e-18;
  for (const auto& [label, ms, eq] : {std::tuple{"n = 2", three, lagrange(three)},
                                      std::tuple{"n = 3", four, tetrahedral(four)}}) {
    const BlowupState s0 = seed_homothetic(eq, 1.0, RegularizedAngles{0.3, 0.2, 0.1, +1});
    const Trajectory tr = integrate_blowup(ms, s0, 0.0, 3.0, bo);
    double shape = 0.0, radial = 0.0, angles = 0.0, rho = 0.0;
    for (std::size_t k = 0; k < tr.tau.size(); ++k) {
      const BlowupState& s = tr.states[k];
      shape = std::max({shape, (s.sigma - s0.sigma).cwiseAbs().maxCoeff(), s.S.cwiseAbs().maxCoeff()});
      radial = std::max(radial, std::abs(s.R - s0.R));
      angles = std::max({angles, std::abs(s.u - s0.u), std::abs(s.v - s0.v), std::abs(s.alpha - s0.alpha)});
      const double exact = std::exp(eq.R * tr.tau[k]);
      rho = std::max(rho, std::abs(s.rho - exact) / exact);
    }
    out.push_back(below(std::string("sigma constant, ") + label, shape, 1e-8));
    out.push_back(below(std::string("Rt constant, ") + label, radial, 1e-8));
    out.push_back(below(std::string("w constant, ") + label, angles, 1e-8));
    out.push_back(below(std::string("rho = rho0 exp(R tau), ") + label, rho, 1e-7));
  }
}

void no_infinite_spin(std::vector<Check>& out, const SuiteOptions&) {
  ExperimentConfig cfg;
  cfg.masses = {1.0, 1.0, 1.0};
  cfg.sigma_guess = lagrange_seed();
  cfg.eps = 1e-3;
  cfg.tau_max = 13.0;
  cfg.eq_threshold = 1.2e-3;
  const Experiment ex = run_experiment(cfg);
  const SpinReport& r = ex.report;
  double worst = 0.0;
  int counted = 0;
  for (std::size_t k = 3; k < r.ratios.size() + 1; ++k) {
    worst = std::max(worst, r.ratios[k - 1]);
    ++counted;
  }
  out.push_back(at_least("dyadic windows with k >= 3", counted, 1.0));
  out.push_back(below("max I_{k+1}/I_k for k >= 3", worst, 0.9));
  out.push_back(below("certified tail bound on w (radians)", r.tail_bound, 1e-6));
  out.push_back(below("sup |1/sigma_{n-1,2}|", r.sup_inv_sigma2, 1e3));
  out.push_back(below("sup |sigma_{n-1,3}/sigma_{n-1,2}|", r.sup_sigma_ratio, 1e3));
  out.push_back(below("|w(b) - w(a)| / (K int |S|) over windows", r.bound_ratio, 1.0 + 1e-9, false));
  out.push_back(below("Cauchy tail / tail bound", r.cauchy_tail / r.tail_bound, 1.0 + 1e-9, false));
  out.push_back(below("energy on {rho = 0, E = 0}", r.energy_check, 1e-9, false));
  out.push_back(below("descent rate relative error", std::abs(r.descent.rate / r.descent.expected_rate - 1.0), 0.3, false));
  out.push_back(below("descent monotonicity violations", r.descent.monotonicity_violations, 0.5, false));
}

double linearization_error(const MassSystem& ms, const EquilibriumReport& eq, const Displacement& dir, double eps) {
  BlowupState bs;
  bs.rho = eps * dir.rho;
  bs.R = eq.R + eps * dir.R;
  bs.S = eps * dir.S;
  bs.sigma = eq.sigma + eps * dir.sigma;
  bs.u = 0.3;
  bs.v = 0.2;
  BlowupOptions bo;
  bo.rtol = 1e-13;
  bo.atol = 1e-13;
  const Trajectory tr = integrate_blowup(ms, bs, 0.0, 1.0, bo);
  Displacement d0{eps * dir.rho, eps * dir.R, eps * dir.S, eps * dir.sigma};
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double tau = k / 20.0;
    const BlowupState s = tr.at(tau);
    const Displacement lin = linearized_flow(eq, d0, tau);
    const double err = std::sqrt(std::pow(s.rho - lin.rho, 2) + std::pow(s.R - eq.R - lin.R, 2) +
                                 (s.S - lin.S).squaredNorm() + (s.sigma - eq.sigma - lin.sigma).squaredNorm());
    worst = std::max(worst, err);
  }
  return worst;
}

void linearization(std::vector<Check>& out, const SuiteOptions& opt) {
  Rng rng(opt.seed + 9);
  const MassSystem three({1.0, 1.0, 1.0});
  const MassSystem four({1.0, 1.0, 1.0, 1.0});
  for (const auto& [label, ms, eq, required] :
       {std::tuple{"equilateral", three, lagrange(three), true}, std::tuple{"collinear", three, euler(three), false},
        std::tuple{"tetrahedral", four, tetrahedral(four), false}}) {
    const int d = static_cast<int>(eq.sigma.size());
    Displacement dir{std::abs(normal(rng)), normal(rng), VecX(d), VecX(d)};
    for (int i = 0; i < d; ++i) {
      dir.S[i] = normal(rng);
      dir.sigma[i] = normal(rng);
    }
    const double scale = std::sqrt(dir.rho * dir.rho + dir.R * dir.R + dir.S.squaredNorm() + dir.sigma.squaredNorm());
    dir.rho /= scale;
    dir.R /= scale;
    dir.S /= scale;
    dir.sigma /= scale;
    const double e1 = linearization_error(ms, eq, dir, 1e-4);
    const double e2 = linearization_error(ms, eq, dir, 1e-5);
    out.push_back(at_least(std::string("observed order, ") + label, std::log10(e1 / e2), 1.8, required));
  }
}

}  // namespace

bool CriterionResult::pass() const {
  bool any = false;
  for (const auto& c : checks) {
    if (!c.required) continue;
    any = true;
    if (!c.pass) return false;
  }
  return any;
}

VecX lagrange_seed() { return Eigen::Vector2d(-1.1, 0.05); }
VecX euler_seed() { return Eigen::Vector2d(-0.01, 0.7); }

Vec3List tetrahedron() {
  return {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
}

VecX configuration_shape(const MassSystem& ms, const Vec3List& q, const Floors& floors) {
  CartesianState s{Vec3List(q.size(), Vec3::Zero()), q};
  return chart_dump(ms, s, floors).shape.sigma;
}

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& opt) {
  std::vector<CriterionResult> out;
  out.push_back(timed(1, "symplecticity of the coordinate changes", [&](auto& c) { symplecticity(c, opt); }));
  out.push_back(timed(2, "Hamiltonian agreement across charts", [&](auto& c) { chart_equivalence(c, opt); }));
  out.push_back(timed(3, "angular-momentum identity", [&](auto& c) { angular_momentum(c, opt); }));
  out.push_back(timed(4, "energy relation and collision-manifold invariance", [&](auto& c) { conservation(c, opt); }));
  out.push_back(timed(5, "central configurations and equilibria", [&](auto& c) { central_configurations(c, opt); }));
  out.push_back(timed(6, "spectral classification", [&](auto& c) { spectral(c, opt); }));
  out.push_back(timed(7, "homothetic solutions", [&](auto& c) { homothetic(c, opt); }));
  out.push_back(timed(8, "no infinite spin on a stable manifold", [&](auto& c) { no_infinite_spin(c, opt); }));
  out.push_back(timed(9, "linearization fidelity", [&](auto& c) { linearization(c, opt); }));
  return out;
}

std::string format_summary(const CriterionResult& r) {
  int req = 0, req_ok = 0;
  for (const auto& c : r.checks)
    if (c.required) {
      ++req;
      req_ok += c.pass ? 1 : 0;
    }
  char buf[256];
  std::snprintf(buf, sizeof buf, "criterion %d %s: %s (%d/%d required checks, %.2f s)", r.id,
                r.pass() ? "PASS" : "FAIL", r.title.c_str(), req_ok, req, r.seconds);
  return buf;
}

std::string format_detail(const CriterionResult& r) {
  std::string s;
  for (const auto& c : r.checks) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "    %-4s %-13s %s: value %.6g, threshold %.3g\n", c.pass ? "ok" : "FAIL",
                  c.required ? "[required]" : "[supplement]", c.name.c_str(), c.value, c.threshold);
    s += buf;
  }
  return s;
}

}  // namespace nbcoll
