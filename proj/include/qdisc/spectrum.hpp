#pragma once

// Spectral data of L- = KK^T - W_x and L+ = KK^T + W_x, where W_x z = <z,x> x.

#include "qdisc/bloch.hpp"

namespace qdisc {

inline Matrix3 rank_one(const Vector3& x) { return x * x.transpose(); }

inline Matrix3 l_minus(const BlochForm& b) { return b.K * b.K.transpose() - rank_one(b.x); }
inline Matrix3 l_plus(const BlochForm& b) { return b.K * b.K.transpose() + rank_one(b.x); }

/// Ordered eigen-decomposition of L- (descending) and the spectrum of L+
/// (ascending). `x_frame` is the Bloch vector x in the L- eigenbasis.
struct EigenFrame {
  Vector3 l_minus_vals = Vector3::Zero();
  Matrix3 l_minus_vecs = Matrix3::Identity();
  Vector3 l_plus_vals = Vector3::Zero();
  Vector3 x_frame = Vector3::Zero();

  double l1() const { return l_minus_vals(0); }
  double l2() const { return l_minus_vals(1); }
  double l3() const { return l_minus_vals(2); }
  double x_norm2() const { return x_frame.squaredNorm(); }

  Vector3 to_lab(const Vector3& v_frame) const { return l_minus_vecs * v_frame; }
  Vector3 to_frame(const Vector3& v_lab) const { return l_minus_vecs.transpose() * v_lab; }
};

/// Gaps below this are treated as degenerate.
inline double degeneracy_tolerance(const EigenFrame& f) {
  return 1e-9 * std::max(1.0, f.l1() - f.l3());
}

inline bool gap12_degenerate(const EigenFrame& f) { return f.l1() - f.l2() <= degeneracy_tolerance(f); }
inline bool gap23_degenerate(const EigenFrame& f) { return f.l2() - f.l3() <= degeneracy_tolerance(f); }

inline EigenFrame eigenframe(const BlochForm& b) {
  EigenFrame f;
  Eigen::SelfAdjointEigenSolver<Matrix3> minus(l_minus(b));
  // Eigen returns ascending order.
  for (int i = 0; i < 3; ++i) {
    f.l_minus_vals(i) = minus.eigenvalues()(2 - i);
    f.l_minus_vecs.col(i) = minus.eigenvectors().col(2 - i);
  }
  for (int i = 0; i < 2; ++i) {
    Vector3 c = f.l_minus_vecs.col(i);
    normalize_sign(c);
    f.l_minus_vecs.col(i) = c;
  }
  f.l_minus_vecs.col(2) = f.l_minus_vecs.col(0).cross(f.l_minus_vecs.col(1));

  Eigen::SelfAdjointEigenSolver<Matrix3> plus(l_plus(b), Eigen::EigenvaluesOnly);
  f.l_plus_vals = plus.eigenvalues();
  f.x_frame = f.l_minus_vecs.transpose() * b.x;
  return f;
}

}  // namespace qdisc
