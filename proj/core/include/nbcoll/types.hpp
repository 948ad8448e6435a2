#pragma once

#include <Eigen/Dense>
#include <vector>

namespace nbcoll {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec3List = std::vector<Vec3>;

// Thresholds below which operations raise typed errors instead of dividing.
struct Floors {
  double r_min = 1e-12;
  double frame = 1e-10;
  double sin_theta = 1e-10;
  double xi_n12 = 1e-10;
  double xi_n3 = 1e-10;
  double radius = 1e-14;
};

// Masses m_1..m_{n+1}. Accessors use the 1-based indices of the formulas:
// m(i) for i = 1..n+1, M(i) = m_1 + ... + m_i for i = 0..n+1, mu(i) for i = 1..n.
class MassSystem {
 public:
  explicit MassSystem(std::vector<double> masses);

  int bodies() const { return static_cast<int>(m_.size()); }
  int n() const { return bodies() - 1; }
  double m(int i) const { return m_[i - 1]; }
  double M(int i) const { return partial_[i]; }
  double mu(int i) const { return mu_[i - 1]; }
  double total() const { return partial_.back(); }
  const std::vector<double>& masses() const { return m_; }
  const std::vector<double>& reduced() const { return mu_; }

 private:
  std::vector<double> m_;
  std::vector<double> partial_;
  std::vector<double> mu_;
};

// Packed layouts of the reduced coordinates.
//   frame vectors (eta, xi): 3(n-2) free components, then (.,2), (.,3) of
//   slot n-1, then the single component 3 of slot n; size 3n-3.
//   shape vectors (S, sigma): the first 3n-4 entries of the frame layout.
inline int frame_dim(int n) { return 3 * n - 3; }
inline int shape_dim(int n) { return 3 * n - 4; }

// Expands a frame-layout vector into n full 3-vectors with structural zeros.
Vec3List expand_frame(const VecX& packed, int n);
// Expands a shape-layout vector into n full 3-vectors; slot n is (0,0,last).
Vec3List expand_shape(const VecX& packed, int n, double last);
VecX pack_frame(const Vec3List& full);
VecX pack_shape(const Vec3List& full);

}  // namespace nbcoll
