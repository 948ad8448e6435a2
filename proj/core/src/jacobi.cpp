#include "nbcoll/jacobi.hpp"

#include "nbcoll/errors.hpp"

namespace nbcoll {

MatX jacobi_position_matrix(const MassSystem& ms) {
  const int n = ms.n();
  MatX a = MatX::Zero(n + 1, n + 1);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= i; ++j) a(i - 1, j - 1) = ms.m(j) / ms.M(i);
    a(i - 1, i) -= 1.0;
  }
  for (int j = 1; j <= n + 1; ++j) a(n, j - 1) = ms.m(j) / ms.total();
  return a;
}

MatX jacobi_momentum_matrix(const MassSystem& ms) {
  // p_i = m_i sum_{j=i}^{n+1} y_j / M_j - y_{i-1}, with y_0 = 0 and y_{n+1} = P.
  const int n = ms.n();
  MatX k = MatX::Zero(n + 1, n + 1);
  for (int i = 1; i <= n + 1; ++i) {
    for (int j = i; j <= n + 1; ++j) k(i - 1, j - 1) += ms.m(i) / ms.M(j);
    if (i >= 2) k(i - 1, i - 2) -= 1.0;
  }
  return k;
}

JacobiState to_jacobi(const MassSystem& ms, const CartesianState& s) {
  const int n = ms.n();
  if (static_cast<int>(s.q.size()) != n + 1 || static_cast<int>(s.p.size()) != n + 1)
    fail(ErrorKind::InvalidArgument, "state size does not match the number of masses");
  const MatX a = jacobi_position_matrix(ms);
  const Eigen::PartialPivLU<MatX> k(jacobi_momentum_matrix(ms));
  MatX q(n + 1, 3), p(n + 1, 3);
  for (int i = 0; i <= n; ++i) {
    q.row(i) = s.q[i].transpose();
    p.row(i) = s.p[i].transpose();
  }
  const MatX xb = a * q;
  const MatX yp = k.solve(p);
  JacobiState js;
  js.x.resize(n);
  js.y.resize(n);
  for (int i = 0; i < n; ++i) {
    js.x[i] = xb.row(i).transpose();
    js.y[i] = yp.row(i).transpose();
  }
  js.B = xb.row(n).transpose();
  js.P = yp.row(n).transpose();
  return js;
}

CartesianState from_jacobi(const MassSystem& ms, const JacobiState& js) {
  const int n = ms.n();
  if (static_cast<int>(js.x.size()) != n || static_cast<int>(js.y.size()) != n)
    fail(ErrorKind::InvalidArgument, "Jacobi state size does not match the number of masses");
  CartesianState s;
  s.q.assign(n + 1, js.B);
  // q_i = -(M_{i-1}/M_i) x_{i-1} + sum_{k=i}^n (m_{k+1}/M_{k+1}) x_k + B.
  for (int i = 1; i <= n + 1; ++i) {
    if (i >= 2) s.q[i - 1] -= ms.M(i - 1) / ms.M(i) * js.x[i - 2];
    for (int k = i; k <= n; ++k) s.q[i - 1] += ms.m(k + 1) / ms.M(k + 1) * js.x[k - 1];
  }
  const MatX k = jacobi_momentum_matrix(ms);
  s.p.assign(n + 1, Vec3::Zero());
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < n; ++j) s.p[i] += k(i, j) * js.y[j];
    s.p[i] += k(i, n) * js.P;
  }
  return s;
}

std::vector<double> reduced_masses(const MassSystem& ms) { return ms.reduced(); }

Vec3 pair_separation(const MassSystem& ms, const Vec3List& xs, int i, int j) {
  Vec3 d = xs[j - 1];
  if (i >= 1) d -= ms.M(i) / ms.M(i + 1) * xs[i - 1];
  for (int k = i + 1; k <= j - 1; ++k) d += ms.m(k + 1) / ms.M(k + 1) * xs[k - 1];
  return d;
}

double potential_jacobi(const MassSystem& ms, const Vec3List& x, const Floors& floors) {
  const int n = ms.n();
  double v = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const double dist = pair_separation(ms, x, i, j).norm();
      if (dist < floors.r_min) fail(ErrorKind::SingularConfiguration, "mutual distance below floor");
      v -= ms.m(i + 1) * ms.m(j + 1) / dist;
    }
  }
  return v;
}

double kinetic_jacobi(const MassSystem& ms, const Vec3List& y) {
  double t = 0.0;
  for (int i = 1; i <= ms.n(); ++i) t += y[i - 1].squaredNorm() / (2.0 * ms.mu(i));
  return t;
}

double hamiltonian_jacobi(const MassSystem& ms, const Vec3List& y, const Vec3List& x,
                          const Floors& floors) {
  return kinetic_jacobi(ms, y) + potential_jacobi(ms, x, floors);
}

Vec3 angular_momentum_jacobi(const Vec3& P, const Vec3& B, const Vec3List& y, const Vec3List& x) {
  Vec3 c = B.cross(P);
  for (std::size_t i = 0; i < x.size(); ++i) c += x[i].cross(y[i]);
  return c;
}

}  // namespace nbcoll
