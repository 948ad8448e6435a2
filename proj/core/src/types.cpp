#include "nbcoll/types.hpp"

#include <string>

#include "nbcoll/errors.hpp"

namespace nbcoll {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::SingularConfiguration: return "singular configuration";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::FrameDegenerate: return "frame degenerate";
    case ErrorKind::GimbalDegenerate: return "gimbal degenerate";
    case ErrorKind::DivisionDegenerate: return "division degenerate";
    case ErrorKind::ChartSeam: return "chart seam";
    case ErrorKind::ChartOrigin: return "chart origin";
    case ErrorKind::SquareRootDomain: return "square-root domain";
    case ErrorKind::Asymmetry: return "asymmetry";
    case ErrorKind::SquareRootFailure: return "square-root failure";
    case ErrorKind::NoStableMode: return "no stable mode";
    case ErrorKind::InsufficientTail: return "insufficient tail";
    case ErrorKind::StepFailure: return "step failure";
    case ErrorKind::NoConvergence: return "no convergence";
  }
  return "unknown";
}

MassSystem::MassSystem(std::vector<double> masses) : m_(std::move(masses)) {
  if (m_.size() < 2) fail(ErrorKind::InvalidArgument, "need at least two bodies");
  partial_.assign(m_.size() + 1, 0.0);
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (!(m_[i] > 0.0)) {
      fail(ErrorKind::InvalidArgument, "mass " + std::to_string(i + 1) + " is not positive");
    }
    partial_[i + 1] = partial_[i] + m_[i];
  }
  const int nn = n();
  mu_.resize(nn);
  for (int i = 1; i <= nn; ++i) mu_[i - 1] = m(i + 1) * M(i) / M(i + 1);
}

Vec3List expand_frame(const VecX& packed, int n) {
  if (packed.size() != frame_dim(n)) fail(ErrorKind::InvalidArgument, "frame vector has wrong size");
  Vec3List out(n, Vec3::Zero());
  for (int j = 0; j < n - 2; ++j) out[j] = packed.segment<3>(3 * j);
  const int k = 3 * (n - 2);
  out[n - 2] = Vec3(0.0, packed[k], packed[k + 1]);
  out[n - 1] = Vec3(0.0, 0.0, packed[k + 2]);
  return out;
}

Vec3List expand_shape(const VecX& packed, int n, double last) {
  if (packed.size() != shape_dim(n)) fail(ErrorKind::InvalidArgument, "shape vector has wrong size");
  VecX frame(frame_dim(n));
  frame << packed, last;
  return expand_frame(frame, n);
}

VecX pack_frame(const Vec3List& full) {
  const int n = static_cast<int>(full.size());
  VecX out(frame_dim(n));
  for (int j = 0; j < n - 2; ++j) out.segment<3>(3 * j) = full[j];
  const int k = 3 * (n - 2);
  out[k] = full[n - 2][1];
  out[k + 1] = full[n - 2][2];
  out[k + 2] = full[n - 1][2];
  return out;
}

VecX pack_shape(const Vec3List& full) {
  VecX frame = pack_frame(full);
  return frame.head(frame.size() - 1);
}

}  // namespace nbcoll
