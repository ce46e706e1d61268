#pragma once

// Density-matrix <-> Bloch/correlation representation of two-qubit states and
// the local SO(3) x SO(3) action on it.

#include "qdisc/core.hpp"

#include <utility>

namespace qdisc {

/// Validation tolerances (absolute) applied to file and user input.
inline constexpr double kStateTol = 1e-10;

/// 4x4 density matrix in the product basis |00>, |01>, |10>, |11>.
/// Instances returned by validate_state() satisfy Hermiticity, unit trace and
/// positivity to kStateTol; from_bloch() output is only guaranteed Hermitian
/// with unit trace.
struct TwoQubitState {
  Matrix4c rho = Matrix4c::Identity() / 4.0;
};

/// rho = 1/4 (I + <x,s> (x) I + I (x) <y,s> + sum_jk K_jk s_j (x) s_k)
struct BlochForm {
  Vector3 x = Vector3::Zero();
  Vector3 y = Vector3::Zero();
  Matrix3 K = Matrix3::Zero();
};

/// U K V^T = diag(D) with U, V in SO(3). Entries of D may be negative.
struct LocalFrame {
  Matrix3 U = Matrix3::Identity();
  Matrix3 V = Matrix3::Identity();
  Vector3 D = Vector3::Zero();
};

inline double min_eigenvalue(const Matrix4c& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline TwoQubitState validate_state(const Matrix4c& rho) {
  const double herm = max_abs(rho - rho.adjoint());
  if (herm > kStateTol)
    throw ValidationError(Violation::NotHermitian, herm, "max |rho - rho^dagger| exceeds 1e-10");

  const double trace_err = std::abs(rho.trace() - cplx(1.0, 0.0));
  if (trace_err > kStateTol)
    throw ValidationError(Violation::NotUnitTrace, trace_err, "|tr rho - 1| exceeds 1e-10");

  // Symmetrize before the eigen solve so rounding-level anti-Hermitian parts
  // do not leak into the spectrum.
  const Matrix4c h = 0.5 * (rho + rho.adjoint());
  const double lmin = min_eigenvalue(h);
  if (lmin < -kStateTol)
    throw ValidationError(Violation::NotPositive, -lmin, "minimum eigenvalue below -1e-10");

  return TwoQubitState{rho};
}

inline BlochForm to_bloch(const TwoQubitState& state) {
  const auto& s = pauli();
  const Matrix2c id = Matrix2c::Identity();
  BlochForm b;
  for (int j = 0; j < 3; ++j) {
    b.x(j) = (state.rho * kron(s[j], id)).trace().real();
    b.y(j) = (state.rho * kron(id, s[j])).trace().real();
    for (int k = 0; k < 3; ++k) b.K(j, k) = (state.rho * kron(s[j], s[k])).trace().real();
  }
  return b;
}

inline TwoQubitState from_bloch(const BlochForm& b) {
  const auto& s = pauli();
  const Matrix2c id = Matrix2c::Identity();
  Matrix4c rho = kron(id, id) + kron(pauli_dot(b.x), id) + kron(id, pauli_dot(b.y));
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) rho += b.K(j, k) * kron(s[j], s[k]);
  return TwoQubitState{rho / 4.0};
}

inline BlochForm apply_local_rotation(const BlochForm& b, const Matrix3& U, const Matrix3& V) {
  if (!is_special_orthogonal(U))
    throw ValidationError(Violation::NotSpecialOrthogonal,
                          max_abs(U * U.transpose() - Matrix3::Identity()) +
                              std::abs(U.determinant() - 1.0),
                          "U is not in SO(3)");
  if (!is_special_orthogonal(V))
    throw ValidationError(Violation::NotSpecialOrthogonal,
                          max_abs(V * V.transpose() - Matrix3::Identity()) +
                              std::abs(V.determinant() - 1.0),
                          "V is not in SO(3)");
  BlochForm out;
  out.x = U * b.x;
  out.y = V * b.y;
  out.K = U * b.K * V.transpose();
  return out;
}

/// Signed-diagonal form of K from its SVD. Singular values come out in
/// descending order; each singular pair is sign-normalized on the left
/// vector, then reflections are folded into the third diagonal entry.
inline std::pair<LocalFrame, BlochForm> diagonalize_correlation(const BlochForm& b) {
  Eigen::JacobiSVD<Matrix3> svd(b.K, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3 left = svd.matrixU();
  Matrix3 right = svd.matrixV();
  Vector3 d = svd.singularValues();

  for (int i = 0; i < 3; ++i) {
    Vector3 col = left.col(i);
    Vector3 flipped = col;
    normalize_sign(flipped);
    if (flipped(0) != col(0) || flipped(1) != col(1) || flipped(2) != col(2)) {
      left.col(i) = -left.col(i);
      right.col(i) = -right.col(i);
    }
  }
  if (left.determinant() < 0) {
    left.col(2) = -left.col(2);
    d(2) = -d(2);
  }
  if (right.determinant() < 0) {
    right.col(2) = -right.col(2);
    d(2) = -d(2);
  }

  LocalFrame frame;
  frame.U = left.transpose();
  frame.V = right.transpose();
  frame.D = d;

  BlochForm out;
  out.x = frame.U * b.x;
  out.y = frame.V * b.y;
  out.K = frame.U * b.K * frame.V.transpose();
  return {frame, out};
}

}  // namespace qdisc
