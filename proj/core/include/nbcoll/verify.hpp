#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nbcoll/types.hpp"

namespace nbcoll {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  bool required = true;  // supplementary checks are reported but do not decide the criterion
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  bool pass() const;
};

struct SuiteOptions {
  std::uint64_t seed = 20261015;
  int samples = 100;
};

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& opt = {});
std::string format_summary(const CriterionResult& r);
std::string format_detail(const CriterionResult& r);

// Shape coordinates of a configuration of n+1 bodies.
VecX configuration_shape(const MassSystem& ms, const Vec3List& q, const Floors& floors = {});
// Equal-mass seeds near the classical central configurations.
VecX lagrange_seed();
VecX euler_seed();
// Regular tetrahedron for four bodies.
Vec3List tetrahedron();

// Max entry of J^T Omega J - Omega for a map on R^{2m} laid out as (positions, momenta).
template <class F>
double symplectic_defect(F&& map, const VecX& z, double step = 1e-4);

template <class F>
double symplectic_defect(F&& map, const VecX& z, double step) {
  const Eigen::Index dim = z.size();
  const Eigen::Index m = dim / 2;
  MatX j(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double h = step * std::max(1.0, std::abs(z[k]));
    VecX p = z;
    p[k] = z[k] + 2 * h;
    const VecX f2 = map(p);
    p[k] = z[k] + h;
    const VecX f1 = map(p);
    p[k] = z[k] - h;
    const VecX m1 = map(p);
    p[k] = z[k] - 2 * h;
    const VecX m2 = map(p);
    j.col(k) = (-f2 + 8 * f1 - 8 * m1 + m2) / (12 * h);
  }
  MatX omega = MatX::Zero(dim, dim);
  omega.topRightCorner(m, m) = MatX::Identity(m, m);
  omega.bottomLeftCorner(m, m) = -MatX::Identity(m, m);
  return (j.transpose() * omega * j - omega).cwiseAbs().maxCoeff();
}

}  // namespace nbcoll
