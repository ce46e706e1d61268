#pragma once

// Named parametric two-qubit families used as fixtures. Every constructor
// checks positivity and throws ValidationError(OutOfPositivityRegion).

#include "qdisc/bloch.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qdisc {

namespace detail {

inline TwoQubitState checked(const Matrix4c& rho, const std::string& what) {
  const double lmin = min_eigenvalue(0.5 * (rho + rho.adjoint()));
  if (lmin < -kStateTol)
    throw ValidationError(Violation::OutOfPositivityRegion, -lmin, what + " is not positive semidefinite");
  return TwoQubitState{rho};
}

inline void require(bool ok, double magnitude, const std::string& msg) {
  if (!ok) throw ValidationError(Violation::OutOfPositivityRegion, magnitude, msg);
}

inline constexpr double kParamSlack = 1e-12;

}  // namespace detail

inline TwoQubitState werner(double t) {
  detail::require(t >= -1.0 - detail::kParamSlack && t <= 1.0 / 3.0 + detail::kParamSlack,
                  std::max(-1.0 - t, t - 1.0 / 3.0), "werner needs -1 <= t <= 1/3");
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = rho(3, 3) = 1.0 + t;
  rho(1, 1) = rho(2, 2) = 1.0 - t;
  rho(1, 2) = rho(2, 1) = 2.0 * t;
  return detail::checked(rho / 4.0, "werner state");
}

inline TwoQubitState isotropic(double t) {
  detail::require(t >= -1.0 / 3.0 - detail::kParamSlack && t <= 1.0 + detail::kParamSlack,
                  std::max(-1.0 / 3.0 - t, t - 1.0), "isotropic needs -1/3 <= t <= 1");
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = rho(3, 3) = 1.0 + t;
  rho(1, 1) = rho(2, 2) = 1.0 - t;
  rho(0, 3) = rho(3, 0) = 2.0 * t;
  return detail::checked(rho / 4.0, "isotropic state");
}

/// Correlation matrix t*I (first family) or t*diag(1,-1,1) (second family),
/// x = (Re z, Im z, (a+b)/2), y = (Re w, Im w, (a-b)/2).
inline TwoQubitState rho1(double a, double b, cplx w, cplx z, double t) {
  Matrix4c rho;
  rho << 1 + a + t, std::conj(w), std::conj(z), 0,
         w, 1 + b - t, 2 * t, std::conj(z),
         z, 2 * t, 1 - b - t, std::conj(w),
         0, z, w, 1 - a + t;
  return detail::checked(rho / 4.0, "rho1");
}

inline TwoQubitState rho2(double a, double b, cplx w, cplx z, double t) {
  Matrix4c rho;
  rho << 1 + a + t, std::conj(w), std::conj(z), 2 * t,
         w, 1 + b - t, 0, std::conj(z),
         z, 0, 1 - b - t, std::conj(w),
         2 * t, z, w, 1 - a + t;
  return detail::checked(rho / 4.0, "rho2");
}

/// x = y = 0, K = diag(i1, i2, i3).
inline TwoQubitState bell_diagonal(double i1, double i2, double i3) {
  BlochForm b;
  b.K = Vector3(i1, i2, i3).asDiagonal();
  return detail::checked(from_bloch(b).rho, "bell-diagonal state");
}

inline TwoQubitState pure_n(double n) {
  detail::require(n >= -detail::kParamSlack && n <= 1.0 + detail::kParamSlack,
                  std::max(-n, n - 1.0), "pure_n needs 0 <= N <= 1");
  n = std::clamp(n, 0.0, 1.0);
  const double s = std::sqrt(1.0 - n * n);
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = 1.0 + s;
  rho(3, 3) = 1.0 - s;
  rho(0, 3) = rho(3, 0) = n;
  return detail::checked(rho / 2.0, "pure state");
}

inline TwoQubitState rho_theta(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = 2.0 * c * c;
  rho(2, 2) = 2.0;
  rho(3, 3) = 2.0 * s * s;
  rho(0, 3) = rho(3, 0) = std::sin(2.0 * theta);
  return TwoQubitState{rho / 4.0};
}

inline TwoQubitState x_state(double r11, double r22, double r33, double r44, double r14, double r23) {
  const double sum = r11 + r22 + r33 + r44;
  detail::require(std::abs(sum - 1.0) <= kStateTol, std::abs(sum - 1.0), "x_state diagonal must sum to 1");
  detail::require(r14 >= 0.0 && r23 >= 0.0, -std::min(r14, r23), "x_state off-diagonals must be nonnegative");
  detail::require(r11 >= -kStateTol && r22 >= -kStateTol && r33 >= -kStateTol && r44 >= -kStateTol,
                  -std::min({r11, r22, r33, r44}), "x_state diagonal must be nonnegative");
  detail::require(r14 * r14 <= r11 * r44 + kStateTol, r14 * r14 - r11 * r44, "x_state needs rho14^2 <= rho11 rho44");
  detail::require(r23 * r23 <= r22 * r33 + kStateTol, r23 * r23 - r22 * r33, "x_state needs rho23^2 <= rho22 rho33");
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = r11;
  rho(1, 1) = r22;
  rho(2, 2) = r33;
  rho(3, 3) = r44;
  rho(0, 3) = rho(3, 0) = r14;
  rho(1, 2) = rho(2, 1) = r23;
  return detail::checked(rho, "x_state");
}

/// K = diag(kappa, 0, 0), x = (x1, 0, x3).
inline TwoQubitState quantum_classical(double kappa, double x1, double x3, const Vector3& y = Vector3::Zero()) {
  BlochForm b;
  b.x = Vector3(x1, 0.0, x3);
  b.y = y;
  b.K(0, 0) = kappa;
  return detail::checked(from_bloch(b).rho, "quantum-classical state");
}

struct BeyondXCoefficients {
  double w1, w2, z;
};

inline BeyondXCoefficients beyond_x_coefficients(double gamma) {
  constexpr double kMaxGamma = 1.7320508075688772;  // sqrt(3)
  detail::require(std::abs(gamma) <= kMaxGamma + detail::kParamSlack, std::abs(gamma) - kMaxGamma,
                  "beyond_x needs |gamma| <= sqrt(3)");
  const double gt = std::sqrt(1.0 + 16.0 * gamma * gamma);
  const double sm = std::sqrt(std::max(0.0, 7.0 - gt));
  const double sp = std::sqrt(7.0 + gt);
  const double den = 2.0 * std::sqrt(2.0) * gt;
  return {(sm * (gt - 1.0) + sp * (gt + 1.0)) / den,
          (sm * (gt + 1.0) + sp * (gt - 1.0)) / den,
          (sp - sm) / gt * std::sqrt(2.0) * gamma};
}

namespace detail {
inline Matrix4c beyond_x_matrix(double gamma, double a) {
  const auto [w1, w2, z] = beyond_x_coefficients(gamma);
  const cplx i(0.0, 1.0);
  const cplx az = a * z;
  Matrix4c rho;
  rho << 1 + a * (1 + w2), -i * az, -i * az, a * (2 - w1),
         i * az, 1 + a * (1 - w2), a * (2 + w1), i * az,
         i * az, a * (2 + w1), 1 - a * (1 + w2), i * az,
         a * (2 - w1), -i * az, -i * az, 1 - a * (1 - w2);
  return rho / 4.0;
}
}  // namespace detail

/// x = (0, 0, a), K = a [[2,0,0],[0,w1,z],[0,z,w2]].
inline TwoQubitState beyond_x(double gamma, double a) {
  return detail::checked(detail::beyond_x_matrix(gamma, a), "beyond_x state");
}

/// Largest a in [0, 1] for which beyond_x(gamma, a) is positive semidefinite,
/// by bisection on the minimum eigenvalue.
inline double max_a(double gamma, double tol = 1e-12) {
  auto ok = [&](double a) { return min_eigenvalue(detail::beyond_x_matrix(gamma, a)) >= 0.0; };
  if (ok(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Name-driven construction (sweeps, fixtures)

enum class Family { Werner, Isotropic, Rho1, Rho2, BellDiagonal, PureN, RhoTheta, XState, QuantumClassical, BeyondX };

class UnknownFamily : public std::runtime_error {
 public:
  explicit UnknownFamily(const std::string& name) : std::runtime_error("UnknownFamily: " + name) {}
};

class UnknownParameter : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FamilySpec {
  Family family = Family::Werner;
  std::map<std::string, double> params;
};

struct FamilyInfo {
  Family family;
  const char* name;
  std::vector<std::string> params;
};

inline const std::vector<FamilyInfo>& family_table() {
  static const std::vector<FamilyInfo> table = {
      {Family::Werner, "werner", {"t"}},
      {Family::Isotropic, "isotropic", {"t"}},
      {Family::Rho1, "rho1", {"a", "b", "w_re", "w_im", "z_re", "z_im", "t"}},
      {Family::Rho2, "rho2", {"a", "b", "w_re", "w_im", "z_re", "z_im", "t"}},
      {Family::BellDiagonal, "bell_diagonal", {"i1", "i2", "i3"}},
      {Family::PureN, "pure_n", {"N"}},
      {Family::RhoTheta, "rho_theta", {"theta"}},
      {Family::XState, "x_state", {"rho11", "rho22", "rho33", "rho44", "rho14", "rho23"}},
      {Family::QuantumClassical, "quantum_classical", {"kappa", "x1", "x3", "y1", "y2", "y3"}},
      {Family::BeyondX, "beyond_x", {"gamma", "a"}},
  };
  return table;
}

inline const FamilyInfo& family_info(Family f) {
  for (const auto& info : family_table())
    if (info.family == f) return info;
  throw UnknownFamily("?");
}

inline Family family_from_name(const std::string& name) {
  for (const auto& info : family_table())
    if (name == info.name) return info.family;
  throw UnknownFamily(name);
}

inline TwoQubitState make_family(const FamilySpec& spec) {
  const FamilyInfo& info = family_info(spec.family);
  for (const auto& [k, _] : spec.params)
    if (std::find(info.params.begin(), info.params.end(), k) == info.params.end())
      throw UnknownParameter("family " + std::string(info.name) + " has no parameter '" + k + "'");
  auto p = [&](const char* k) {
    auto it = spec.params.find(k);
    return it == spec.params.end() ? 0.0 : it->second;
  };
  switch (spec.family) {
    case Family::Werner: return werner(p("t"));
    case Family::Isotropic: return isotropic(p("t"));
    case Family::Rho1: return rho1(p("a"), p("b"), {p("w_re"), p("w_im")}, {p("z_re"), p("z_im")}, p("t"));
    case Family::Rho2: return rho2(p("a"), p("b"), {p("w_re"), p("w_im")}, {p("z_re"), p("z_im")}, p("t"));
    case Family::BellDiagonal: return bell_diagonal(p("i1"), p("i2"), p("i3"));
    case Family::PureN: return pure_n(p("N"));
    case Family::RhoTheta: return rho_theta(p("theta"));
    case Family::XState: return x_state(p("rho11"), p("rho22"), p("rho33"), p("rho44"), p("rho14"), p("rho23"));
    case Family::QuantumClassical:
      return quantum_classical(p("kappa"), p("x1"), p("x3"), Vector3(p("y1"), p("y2"), p("y3")));
    case Family::BeyondX: return beyond_x(p("gamma"), p("a"));
  }
  throw UnknownFamily("?");
}

}  // namespace qdisc
