#pragma once

// Local projective measurement on subsystem A, the disturbance S = rho - P(rho)
// and its trace norm, both from the 4x4 spectrum and from the Bloch data.

#include "qdisc/bloch.hpp"
#include "qdisc/search.hpp"
#include "qdisc/spectrum.hpp"

#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace qdisc {

/// Unit axis v; v and -v describe the same measurement.
class MeasurementAxis {
 public:
  MeasurementAxis() = default;
  explicit MeasurementAxis(const Vector3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("measurement axis must be a nonzero finite vector");
    v_ = v / n;
  }
  MeasurementAxis(double a, double b, double c) : MeasurementAxis(Vector3(a, b, c)) {}

  const Vector3& v() const { return v_; }
  Matrix3 projector() const { return v_ * v_.transpose(); }
  Matrix3 complement() const { return Matrix3::Identity() - projector(); }

  /// Representative with the first non-negligible component positive.
  MeasurementAxis canonical() const {
    MeasurementAxis out = *this;
    normalize_sign(out.v_);
    return out;
  }

 private:
  Vector3 v_ = Vector3::UnitZ();
};

inline TwoQubitState measure_channel(const TwoQubitState& state, const MeasurementAxis& axis) {
  const Matrix2c id = Matrix2c::Identity();
  const Matrix2c vs = pauli_dot(axis.v());
  const Matrix4c a = kron(0.5 * (id + vs), id);
  const Matrix4c b = kron(0.5 * (id - vs), id);
  return TwoQubitState{a * state.rho * a + b * state.rho * b};
}

inline Matrix4c disturbance_matrix(const TwoQubitState& state, const MeasurementAxis& axis) {
  return state.rho - measure_channel(state, axis).rho;
}

inline double trace_norm_direct(const Matrix4c& s) {
  const Matrix4c h = 0.5 * (s + s.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// g1, g2

inline constexpr double kSingularTol = 1e-10;
inline constexpr double kRadicandError = 1e-9;

/// Precomputed KK^T, E^T E and L- for repeated evaluation at many axes.
struct DisturbanceEvaluator {
  Vector3 x;
  Matrix3 K;
  Matrix3 KKt;
  Matrix3 EtE;
  Matrix3 Lm;
  double trKKt;

  explicit DisturbanceEvaluator(const BlochForm& b)
      : x(b.x), K(b.K), KKt(b.K * b.K.transpose()), trKKt(0.0) {
    const Matrix3 e = adjugate(b.K);
    EtE = e.transpose() * e;
    trKKt = KKt.trace();
    Lm = KKt - x * x.transpose();
  }

  /// (g1, g2) at unit v.
  std::pair<double, double> g(const Vector3& v) const {
    const Vector3 mx = x - x.dot(v) * v;
    const double g1 = mx.squaredNorm() + trKKt - v.dot(KKt * v);
    const double g2 = 4.0 * ((K.transpose() * mx).squaredNorm() + v.dot(EtE * v));
    return {g1, g2};
  }

  /// ||S||_1^2 at unit v. With A the compression of L- to the plane
  /// orthogonal to v, g1^2 - g2 = (tr A)^2 - 4 det A, so
  ///   ||S||_1^2 = lambda_max(A) + |x|^2 - <x,v>^2.
  /// Unlike (g1 + sqrt(g1^2 - g2)) / 2 this keeps full precision next to the
  /// singular set, where the radicand cancels to rounding noise.
  double norm2(const Vector3& v) const {
    const auto [e1, e2] = orthonormal_complement(v);
    const Vector3 l1 = Lm * e1;
    const double a11 = e1.dot(l1), a12 = e2.dot(l1), a22 = e2.dot(Lm * e2);
    const double top = 0.5 * (a11 + a22 + std::hypot(a11 - a22, 2.0 * a12));
    const double xv = x.dot(v);
    return std::max(0.0, top + x.squaredNorm() - xv * xv);
  }

  /// sqrt(g1^2 - g2) without cancellation.
  double radicand_root(const Vector3& v) const {
    const auto [e1, e2] = orthonormal_complement(v);
    const Vector3 l1 = Lm * e1;
    return std::hypot(e1.dot(l1) - e2.dot(Lm * e2), 2.0 * e2.dot(l1));
  }

  double norm(const Vector3& v) const { return std::sqrt(norm2(v)); }
};

inline std::pair<double, double> g_pair(const BlochForm& b, const MeasurementAxis& axis) {
  return DisturbanceEvaluator(b).g(axis.v());
}

/// g1 = tr L+ - <v, L+ v>
inline double g1_lplus(const BlochForm& b, const MeasurementAxis& axis) {
  const Matrix3 lp = l_plus(b);
  return lp.trace() - axis.v().dot(lp * axis.v());
}

/// g1 = tr L- - <v, L- v> + 2 (|x|^2 - <x,v>^2)
inline double g1_lminus(const BlochForm& b, const MeasurementAxis& axis) {
  const Matrix3 lm = l_minus(b);
  const Vector3& v = axis.v();
  const double xv = b.x.dot(v);
  return lm.trace() - v.dot(lm * v) + 2.0 * (b.x.squaredNorm() - xv * xv);
}

/// g2 = 4 (|x|^2 - <x,v>^2)(tr L- - <v, L- v> + |x|^2 - <x,v>^2) + 4 <v, adj(L-) v>
inline double g2_lminus(const BlochForm& b, const MeasurementAxis& axis) {
  const Matrix3 lm = l_minus(b);
  const Vector3& v = axis.v();
  const double xv = b.x.dot(v);
  const double perp = b.x.squaredNorm() - xv * xv;
  return 4.0 * perp * (lm.trace() - v.dot(lm * v) + perp) + 4.0 * v.dot(adjugate(lm) * v);
}

struct DisturbanceReport {
  double trace_norm = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  bool in_singular_set = false;
};

inline bool singular_membership(double g1, double g2) {
  return std::abs(g1 * g1 - g2) <= kSingularTol * std::max(1.0, g1 * g1);
}

inline DisturbanceReport trace_norm_closed(const BlochForm& b, const MeasurementAxis& axis) {
  const DisturbanceEvaluator ev(b);
  const auto [g1, g2] = ev.g(axis.v());
  const double rad = g1 * g1 - g2;
  if (rad < -kRadicandError) throw NegativeRadicand(rad);
  DisturbanceReport r;
  r.g1 = g1;
  r.g2 = g2;
  // sqrt(g1^2 - g2) taken from the compression identity: the literal
  // difference is rounding noise of size eps * g1^2 on the singular set,
  // which the square root would lift to ~1e-9.
  r.trace_norm = std::sqrt(std::max(0.0, 0.5 * (g1 + ev.radicand_root(axis.v()))));
  r.in_singular_set = singular_membership(g1, g2);
  return r;
}

inline double singular_set_residual(const BlochForm& b, const MeasurementAxis& axis) {
  const auto [g1, g2] = g_pair(b, axis);
  return g1 * g1 - g2;
}

/// Left-hand side of the quartic describing the singular set, with v given
/// in the L- eigenframe.
inline double singular_set_polynomial(const EigenFrame& f, const Vector3& v_frame) {
  const double a = v_frame(0) * v_frame(0), c = v_frame(1) * v_frame(1), d = v_frame(2) * v_frame(2);
  const double d12 = f.l1() - f.l2(), d23 = f.l2() - f.l3(), d13 = f.l1() - f.l3();
  return d12 * d12 * (d - a * c) + d23 * d23 * (a - c * d) + d13 * d13 * (c - a * d);
}

// ---------------------------------------------------------------------------
// Singular set

struct WholeSphere {};
using SingularSet = std::variant<std::vector<MeasurementAxis>, WholeSphere>;

inline SingularSet singular_set_solve(const BlochForm& b) {
  const EigenFrame f = eigenframe(b);
  const bool deg12 = gap12_degenerate(f);
  const bool deg23 = gap23_degenerate(f);
  if (deg12 && deg23) return WholeSphere{};
  std::vector<MeasurementAxis> out;
  if (deg12) {
    out.emplace_back(f.to_lab(Vector3::UnitZ()).eval());
  } else if (deg23) {
    out.emplace_back(f.to_lab(Vector3::UnitX()).eval());
  } else {
    const double d13 = f.l1() - f.l3();
    const double v1 = std::sqrt(std::max(0.0, (f.l1() - f.l2()) / d13));
    const double v3 = std::sqrt(std::max(0.0, (f.l2() - f.l3()) / d13));
    out.emplace_back(f.to_lab(Vector3(v1, 0.0, v3)).eval());
    out.emplace_back(f.to_lab(Vector3(v1, 0.0, -v3)).eval());
  }
  return out;
}

/// Minimizer of g1 over the singular set. For the whole sphere this is the
/// axis along x (g1 = 2(int + |x|^2 - <x,v>^2) there), or e3 when x = 0.
inline MeasurementAxis singular_minimizer(const BlochForm& b) {
  const SingularSet set = singular_set_solve(b);
  if (std::holds_alternative<WholeSphere>(set)) {
    if (b.x.norm() > 1e-14) return MeasurementAxis(b.x);
    return MeasurementAxis(Vector3::UnitZ());
  }
  const DisturbanceEvaluator ev(b);
  const auto& axes = std::get<std::vector<MeasurementAxis>>(set);
  MeasurementAxis best = axes.front();
  double best_g1 = ev.g(best.v()).first;
  for (const auto& a : axes) {
    const double g1 = ev.g(a.v()).first;
    if (g1 < best_g1) {
      best = a;
      best_g1 = g1;
    }
  }
  return best;
}

/// Sampled check of the two inequalities certifying that the minimum of the
/// trace norm sits at v_star on the singular set. False means only the upper
/// bound D1 <= sqrt(g1(v_star) / 2) is established.
inline bool singular_min_check(const BlochForm& b, const MeasurementAxis& v_star, int samples = 20000) {
  const DisturbanceEvaluator ev(b);
  const auto [g1s, g2s] = ev.g(v_star.v());
  const double slack = 1e-12 * std::max(1.0, g1s * g1s);
  for (const Vector3& v : fibonacci_sphere(samples)) {
    const auto [g1, g2] = ev.g(v);
    if (g1s > 2.0 * g1 + slack) return false;
    if (g1 <= g1s && g1s * g1 < 0.5 * (g2 + g2s) - slack) return false;
  }
  return true;
}

}  // namespace qdisc
