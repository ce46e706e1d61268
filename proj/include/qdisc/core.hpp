#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace qdisc {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix<cplx, 2, 2>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;
using Vector4 = Eigen::Vector4d;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors

enum class Violation {
  NotHermitian,
  NotUnitTrace,
  NotPositive,
  OutOfPositivityRegion,
  NotSpecialOrthogonal,
};

inline const char* to_string(Violation v) {
  switch (v) {
    case Violation::NotHermitian: return "NotHermitian";
    case Violation::NotUnitTrace: return "NotUnitTrace";
    case Violation::NotPositive: return "NotPositive";
    case Violation::OutOfPositivityRegion: return "OutOfPositivityRegion";
    case Violation::NotSpecialOrthogonal: return "NotSpecialOrthogonal";
  }
  return "?";
}

/// Input rejected by a state or rotation check. `magnitude()` is the size of
/// the violation (e.g. the most negative eigenvalue).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(Violation kind, double magnitude, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail +
                           " (magnitude " + std::to_string(magnitude) + ")"),
        kind_(kind),
        magnitude_(magnitude) {}

  Violation kind() const noexcept { return kind_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  Violation kind_;
  double magnitude_;
};

/// g1^2 - g2 came out clearly negative. This is an analytic identity, so it
/// signals a bug rather than bad data.
class NegativeRadicand : public std::runtime_error {
 public:
  explicit NegativeRadicand(double value)
      : std::runtime_error("NegativeRadicand: g1^2 - g2 = " + std::to_string(value)),
        value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// The non-degenerate closed form was asked for on a spectrum with a
/// (near-)degenerate gap.
class DegenerateGap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An analytic candidate disagreed with its 1-D numeric minimizer.
class InternalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Pauli algebra

inline const std::array<Matrix2c, 3>& pauli() {
  static const std::array<Matrix2c, 3> s = [] {
    std::array<Matrix2c, 3> m;
    const cplx i(0.0, 1.0);
    m[0] << 0, 1, 1, 0;
    m[1] << 0, -i, i, 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  return s;
}

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

/// <n, sigma> = n1 s1 + n2 s2 + n3 s3
inline Matrix2c pauli_dot(const Vector3& n) {
  const auto& s = pauli();
  return n(0) * s[0] + n(1) * s[1] + n(2) * s[2];
}

// ---------------------------------------------------------------------------
// Small dense helpers

/// Transpose of the cofactor matrix; defined for singular input.
inline Matrix3 adjugate(const Matrix3& k) {
  Matrix3 e;
  e(0, 0) = k(1, 1) * k(2, 2) - k(1, 2) * k(2, 1);
  e(0, 1) = k(0, 2) * k(2, 1) - k(0, 1) * k(2, 2);
  e(0, 2) = k(0, 1) * k(1, 2) - k(0, 2) * k(1, 1);
  e(1, 0) = k(1, 2) * k(2, 0) - k(1, 0) * k(2, 2);
  e(1, 1) = k(0, 0) * k(2, 2) - k(0, 2) * k(2, 0);
  e(1, 2) = k(0, 2) * k(1, 0) - k(0, 0) * k(1, 2);
  e(2, 0) = k(1, 0) * k(2, 1) - k(1, 1) * k(2, 0);
  e(2, 1) = k(0, 1) * k(2, 0) - k(0, 0) * k(2, 1);
  e(2, 2) = k(0, 0) * k(1, 1) - k(0, 1) * k(1, 0);
  return e;
}

/// Flip `v` so its first component with |.| > tol is positive.
template <typename Vec>
void normalize_sign(Vec& v, double tol = 1e-12) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

/// Orthonormal pair (e1, e2) with (e1, e2, v) right-handed, for unit v.
inline std::pair<Eigen::Vector3d, Eigen::Vector3d> orthonormal_complement(const Eigen::Vector3d& v) {
  const Eigen::Vector3d helper = std::abs(v(0)) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = v.cross(helper).normalized();
  return {e1, v.cross(e1)};
}

inline bool is_special_orthogonal(const Matrix3& r, double tol = 1e-10) {
  return max_abs(r * r.transpose() - Matrix3::Identity()) <= tol &&
         std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace qdisc
