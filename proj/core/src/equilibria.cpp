#include "nbcoll/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nbcoll/errors.hpp"
#include "nbcoll/shape.hpp"
#include "nbcoll/so3.hpp"

namespace nbcoll {
namespace {

double safe_grad_sq(const MassSystem& ms, const VecX& sigma, const Floors& floors) {
  try {
    return shape_potential_gradient(ms, sigma, floors).squaredNorm();
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

double second_index(int n) { return 3 * (n - 2); }

// exp(M tau) for M = [[-R/2, c], [1, 0]] acting on (w, s).
Eigen::Matrix2d mode_propagator(double R, double c, double tau) {
  Eigen::Matrix2d m;
  m << -R / 2.0, c, 1.0, 0.0;
  const double mu0 = -R / 4.0;
  const double disc = R * R / 16.0 + c;
  const Eigen::Matrix2d shifted = m - mu0 * Eigen::Matrix2d::Identity();
  const double scale = std::exp(mu0 * tau);
  const double delta = std::sqrt(std::abs(disc));
  if (delta * std::abs(tau) < 1e-8) return scale * (Eigen::Matrix2d::Identity() + tau * shifted);
  if (disc > 0.0)
    return scale * (std::cosh(delta * tau) * Eigen::Matrix2d::Identity() + std::sinh(delta * tau) / delta * shifted);
  return scale * (std::cos(delta * tau) * Eigen::Matrix2d::Identity() + std::sin(delta * tau) / delta * shifted);
}

}  // namespace

double equilibrium_radial(double V) {
  if (!(V > 0.0)) fail(ErrorKind::SquareRootDomain, "equilibrium needs V > 0");
  return -std::sqrt(2.0 * V);
}

VecX reflect_shape(const VecX& sigma, int n) {
  VecX out = sigma;
  for (int j = 0; j < n - 2; ++j) out[3 * j + 1] = -out[3 * j + 1];
  out[static_cast<Eigen::Index>(second_index(n))] *= -1.0;
  return out;
}

MatX potential_hessian(const MassSystem& ms, const VecX& sigma, double step, const Floors& floors) {
  const Eigen::Index d = sigma.size();
  MatX h(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double s = step * std::max(1.0, std::abs(sigma[k]));
    VecX p = sigma;
    p[k] = sigma[k] + 2 * s;
    const VecX g2 = shape_potential_gradient(ms, p, floors);
    p[k] = sigma[k] + s;
    const VecX g1 = shape_potential_gradient(ms, p, floors);
    p[k] = sigma[k] - s;
    const VecX m1 = shape_potential_gradient(ms, p, floors);
    p[k] = sigma[k] - 2 * s;
    const VecX m2 = shape_potential_gradient(ms, p, floors);
    h.col(k) = (-g2 + 8 * g1 - 8 * m1 + m2) / (12 * s);
  }
  return h;
}

Linearization linearize(const MassSystem& ms, const VecX& sigma_star, double step, const Floors& floors) {
  Linearization lin;
  lin.A = shape_metric(ms, sigma_star, floors);
  lin.A = 0.5 * (lin.A + lin.A.transpose()).eval();
  const MatX b1 = potential_hessian(ms, sigma_star, step, floors);
  const MatX b2 = potential_hessian(ms, sigma_star, 2.0 * step, floors);
  const double scale = std::max(b1.norm(), std::numeric_limits<double>::min());
  lin.asymmetry = (b1 - b1.transpose()).norm() / scale;
  lin.richardson = (b1 - b2).norm() / scale;
  if (lin.asymmetry > 1e-6) fail(ErrorKind::Asymmetry, "potential Hessian is not symmetric");
  lin.B = 0.5 * (b1 + b1.transpose());
  return lin;
}

std::pair<Complex, Complex> mode_eigenvalues(double R, double c, double factor) {
  const Complex root = std::sqrt(Complex(R * R + factor * c, 0.0));
  return {Complex(-R / 4.0, 0.0) + root / 4.0, Complex(-R / 4.0, 0.0) - root / 4.0};
}

Spectrum classify(double R, const MatX& A, const MatX& B, double zero_threshold) {
  Spectrum sp;
  sp.zero_threshold = zero_threshold;
  Eigen::SelfAdjointEigenSolver<MatX> ea(A);
  if (ea.info() != Eigen::Success || ea.eigenvalues().minCoeff() <= 0.0)
    fail(ErrorKind::SquareRootFailure, "A is not positive definite");
  sp.alpha = ea.eigenvectors() * ea.eigenvalues().cwiseSqrt().asDiagonal() * ea.eigenvectors().transpose();
  MatX m = sp.alpha * B * sp.alpha;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatX> em(m);
  sp.C = em.eigenvectors();
  sp.c = em.eigenvalues();
  const double norm = sp.c.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < sp.c.size(); ++j) {
    const auto [lp, lm] = mode_eigenvalues(R, sp.c[j]);
    sp.lambda_plus.push_back(lp);
    sp.lambda_minus.push_back(lm);
    if (std::abs(sp.c[j]) < zero_threshold * norm) ++sp.center_dim;
  }
  sp.hyperbolic = sp.center_dim == 0;
  return sp;
}

std::vector<Complex> block_eigenvalues(double R, const MatX& A, const MatX& B) {
  const Eigen::Index d = A.rows();
  MatX m = MatX::Zero(2 * d, 2 * d);
  m.topLeftCorner(d, d) = -R / 2.0 * MatX::Identity(d, d);
  m.topRightCorner(d, d) = B;
  m.bottomLeftCorner(d, d) = A;
  Eigen::EigenSolver<MatX> es(m, false);
  std::vector<Complex> out;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()[k]);
  return out;
}

double match_eigenvalues(std::vector<Complex> reference, const std::vector<Complex>& target) {
  if (reference.size() != target.size()) fail(ErrorKind::InvalidArgument, "eigenvalue lists differ in length");
  double worst = 0.0;
  for (const Complex& z : target) {
    auto best = std::min_element(reference.begin(), reference.end(),
                                 [&](const Complex& a, const Complex& b) { return std::abs(a - z) < std::abs(b - z); });
    worst = std::max(worst, std::abs(*best - z));
    reference.erase(best);
  }
  return worst;
}

EquilibriumReport find_central_config(const MassSystem& ms, const VecX& sigma_guess, const NewtonOptions& opt,
                                      const Floors& floors) {
  const int n = ms.n();
  const int d = shape_dim(n);
  if (sigma_guess.size() != d) fail(ErrorKind::InvalidArgument, "sigma guess has wrong size");
  const Eigen::Index k2 = static_cast<Eigen::Index>(second_index(n));
  VecX sigma = sigma_guess;
  if (sigma[k2] > 0.0) sigma = reflect_shape(sigma, n);
  VecX g = shape_potential_gradient(ms, sigma, floors);
  int it = 0;
  while (g.norm() >= opt.tol) {
    if (++it > opt.max_iter) fail(ErrorKind::NoConvergence, "Newton did not converge");
    const MatX h = potential_hessian(ms, sigma, opt.hessian_step, floors);
    VecX dx = h.fullPivLu().solve(-g);
    if (!dx.allFinite()) dx = -h.transpose() * g;
    const double phi0 = g.squaredNorm();
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      VecX trial = sigma + t * dx;
      if (safe_grad_sq(ms, trial, floors) <= (1.0 - 1e-4 * t) * phi0) {
        sigma = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      const VecX gd = -h.transpose() * g;
      t = 1.0;
      for (int ls = 0; ls < 60 && !accepted; ++ls, t *= 0.5) {
        VecX trial = sigma + t * gd;
        if (safe_grad_sq(ms, trial, floors) < phi0) {
          sigma = trial;
          accepted = true;
        }
      }
      if (!accepted) {
        if (std::sqrt(phi0) < 100.0 * opt.tol) break;
        fail(ErrorKind::NoConvergence, "line search failed");
      }
    }
    if (sigma[k2] > 0.0) sigma = reflect_shape(sigma, n);
    g = shape_potential_gradient(ms, sigma, floors);
  }
  if (g.norm() >= opt.tol) fail(ErrorKind::NoConvergence, "gradient stalled above tolerance");
  EquilibriumReport rep;
  rep.sigma = sigma;
  rep.grad_norm = g.norm();
  rep.iterations = it;
  rep.dimension = d;
  rep.chart_boundary = std::abs(sigma[k2]) < 1e-8;
  rep.V = shape_potential(ms, sigma, floors);
  rep.R = equilibrium_radial(rep.V);
  const Linearization lin = linearize(ms, sigma, opt.hessian_step, floors);
  rep.A = lin.A;
  rep.B = lin.B;
  rep.b_asymmetry = lin.asymmetry;
  rep.b_richardson = lin.richardson;
  rep.spectrum = classify(rep.R, rep.A, rep.B, opt.zero_threshold);
  return rep;
}

Displacement linearized_flow(const EquilibriumReport& eq, const Displacement& d0, double tau) {
  const Spectrum& sp = eq.spectrum;
  const MatX alpha_inv = sp.alpha.inverse();
  const VecX s0 = sp.C.transpose() * alpha_inv * d0.sigma;
  const VecX w0 = sp.C.transpose() * sp.alpha * d0.S;
  VecX s(s0.size()), w(w0.size());
  for (Eigen::Index j = 0; j < s0.size(); ++j) {
    const Eigen::Vector2d z = mode_propagator(eq.R, sp.c[j], tau) * Eigen::Vector2d(w0[j], s0[j]);
    w[j] = z[0];
    s[j] = z[1];
  }
  Displacement out;
  out.rho = d0.rho * std::exp(eq.R * tau);
  out.R = d0.R * std::exp(eq.R * tau);
  out.S = alpha_inv * sp.C * w;
  out.sigma = sp.alpha * sp.C * s;
  return out;
}

BlowupState restricted_to_blowup(const MassSystem& ms, const EquilibriumReport& eq, const VecX& w, const VecX& s,
                                 const Floors& floors) {
  const Spectrum& sp = eq.spectrum;
  BlowupState bs;
  bs.rho = 0.0;
  bs.sigma = eq.sigma + sp.alpha * sp.C * s;
  bs.S = sp.alpha.inverse() * sp.C * w;
  const double arg = 2.0 * (shape_potential(ms, bs.sigma, floors) - shape_kinetic(ms, bs.S, bs.sigma, floors));
  if (!(arg > 0.0)) fail(ErrorKind::SquareRootDomain, "2V - w.Aw must be positive");
  bs.R = -std::sqrt(arg);
  return bs;
}

RestrictedRates restricted_center_flow(const MassSystem& ms, const EquilibriumReport& eq, const VecX& w, const VecX& s,
                                       double fd_step, const Floors& floors) {
  const Spectrum& sp = eq.spectrum;
  const MatX ac = sp.alpha * sp.C;
  const MatX ac_inv = ac.inverse();
  const VecX sigma = eq.sigma + ac * s;
  const VecX S = ac_inv.transpose() * w;
  const MatX a_s = ac_inv * shape_metric(ms, sigma, floors) * ac_inv.transpose();
  const double quad = w.dot(a_s * w);
  const double v = shape_potential(ms, sigma, floors);
  if (!(2.0 * v - quad > 0.0)) fail(ErrorKind::SquareRootDomain, "2V - w.Aw must be positive");
  // d/ds of w.A(s)w/2 by differences of T in s.
  VecX dquad(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double h = fd_step * std::max(1.0, std::abs(s[k]));
    auto t_at = [&](double shift) {
      VecX sk = s;
      sk[k] += shift;
      return shape_kinetic(ms, S, eq.sigma + ac * sk, floors);
    };
    dquad[k] = (-t_at(2 * h) + 8 * t_at(h) - 8 * t_at(-h) + t_at(-2 * h)) / (12 * h);
  }
  RestrictedRates r;
  r.w = -dquad + ac.transpose() * shape_potential_gradient(ms, sigma, floors) + 0.5 * w * std::sqrt(2.0 * v - quad);
  r.s = a_s * w;
  return r;
}

std::vector<EquilibriumReport> survey(const MassSystem& ms, const SurveyOptions& opt, const Floors& floors) {
  const int n = ms.n();
  const int d = shape_dim(n);
  const Eigen::Index k2 = static_cast<Eigen::Index>(second_index(n));
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(-opt.box, opt.box);
  std::vector<EquilibriumReport> found;
  for (int r = 0; r < opt.restarts; ++r) {
    VecX guess(d);
    for (int k = 0; k < d; ++k) guess[k] = unif(rng);
    guess[k2] = -std::abs(guess[k2]);
    try {
      EquilibriumReport rep = find_central_config(ms, guess, opt.newton, floors);
      const bool known = std::any_of(found.begin(), found.end(), [&](const EquilibriumReport& e) {
        return (e.sigma - rep.sigma).norm() < opt.cluster_tol ||
               (e.sigma - reflect_shape(rep.sigma, n)).norm() < opt.cluster_tol;
      });
      if (!known) found.push_back(std::move(rep));
    } catch (const Error&) {
    }
  }
  std::sort(found.begin(), found.end(), [](const EquilibriumReport& a, const EquilibriumReport& b) { return a.V < b.V; });
  return found;
}

RotationGeneratorTest rotation_generator_test(const MassSystem& ms, const EquilibriumReport& eq, double step,
                                              const Floors& floors) {
  const int n = ms.n();
  const Vec3List xi = expand_shape(eq.sigma, n, 1.0);
  auto chart = [&](const Mat3& rot) {
    Vec3List r(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) r[j] = rot * xi[j];
    const Frame f = moving_frame(r[n - 2], r[n - 1], floors);
    const Mat3 basis = f.matrix();
    Vec3List body(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) body[j] = basis.transpose() * r[j];
    const double last = body[n - 1][2];
    VecX packed = pack_shape(body);
    return VecX(packed / last);
  };
  RotationGeneratorTest out;
  const double bnorm = std::max(eq.B.norm(), std::numeric_limits<double>::min());
  for (int a = 0; a < 3; ++a) {
    const Vec3 axis = Vec3::Unit(a);
    const VecX plus = chart(Eigen::AngleAxisd(step, axis).toRotationMatrix());
    const VecX minus = chart(Eigen::AngleAxisd(-step, axis).toRotationMatrix());
    const VecX t = (plus - minus) / (2.0 * step);
    const double tn = t.norm();
    const double res = tn > 0.0 ? (eq.B * t).norm() / (bnorm * tn) : 0.0;
    out.tangents.push_back(t);
    out.tangent_norms.push_back(tn);
    out.b_residuals.push_back(res);
    if (tn > 1e-6 && res < 1e-6) ++out.certified_center_directions;
  }
  return out;
}

}  // namespace nbcoll
