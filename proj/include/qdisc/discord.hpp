#pragma once

// Closed-form trace-norm discord D1 of a two-qubit state, plus D2 and the
// L+ lower bound. Everything below works in the ordered L- eigenframe.

#include "qdisc/disturbance.hpp"
#include "qdisc/search.hpp"
#include "qdisc/spectrum.hpp"

#include <array>
#include <optional>
#include <sstream>
#include <string>

namespace qdisc {

enum class Branch {
  Degenerate12,
  Degenerate23,
  FullyDegenerate,
  CircleV1,
  CircleV3,
  CircleV2MuStar,
  CircleV2MuStarStar,
};

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Degenerate12: return "Degenerate12";
    case Branch::Degenerate23: return "Degenerate23";
    case Branch::FullyDegenerate: return "FullyDegenerate";
    case Branch::CircleV1: return "Circle_v1";
    case Branch::CircleV3: return "Circle_v3";
    case Branch::CircleV2MuStar: return "Circle_v2_mu_star";
    case Branch::CircleV2MuStarStar: return "Circle_v2_mu_star_star";
  }
  return "?";
}

inline std::optional<Branch> branch_from_string(const std::string& s) {
  for (Branch b : {Branch::Degenerate12, Branch::Degenerate23, Branch::FullyDegenerate, Branch::CircleV1,
                   Branch::CircleV3, Branch::CircleV2MuStar, Branch::CircleV2MuStarStar})
    if (s == to_string(b)) return b;
  return std::nullopt;
}

/// Squared-discord candidates of the non-degenerate case, in branch order.
struct Candidates {
  double d1 = 0.0;
  double d2 = 0.0;
  double mu_star = 0.0;
  double mu_star_star = 0.0;

  std::array<double, 4> values() const { return {d1, d2, mu_star, mu_star_star}; }
};

struct DiscordResult {
  double d1_value = 0.0;
  MeasurementAxis axis;
  Branch branch = Branch::FullyDegenerate;
  double d2_value = 0.0;
  double lower_bound = 0.0;
  std::optional<Candidates> candidates;
  EigenFrame frame;
  bool axis_in_singular_set = false;
};

inline double discord_d2(const BlochForm& b) {
  const EigenFrame f = eigenframe(b);
  return 0.5 * (f.l_plus_vals(0) + f.l_plus_vals(1));
}

inline double discord_lower_bound(const BlochForm& b) {
  const EigenFrame f = eigenframe(b);
  return std::sqrt(std::max(0.0, 0.5 * (f.l_plus_vals(0) + f.l_plus_vals(1))));
}

// ---------------------------------------------------------------------------
// Gap angle and the piecewise functions p, r

struct GapFunctions {
  double phi_gap = 0.0;
  /// Value of sigma at -pi, -pi/2, 0, pi/2, pi where it is otherwise free.
  double sigma_boundary = 1.0;

  double sigma(double t) const {
    if ((t > -kPi && t < -kPi / 2) || (t > 0 && t < kPi / 2)) return 1.0;
    if ((t > -kPi / 2 && t < 0) || (t > kPi / 2 && t < kPi)) return -1.0;
    return sigma_boundary;
  }

  bool in_gap_set(double t) const {
    return (t > -kPi + phi_gap && t < -phi_gap) || (t > phi_gap && t < kPi - phi_gap);
  }

  double shifted_cos2(double t) const {
    const double c = std::cos(t - sigma(t) * phi_gap);
    return c * c;
  }

  double p(double t) const { return in_gap_set(t) ? 1.0 : shifted_cos2(t); }
  double r(double t) const { return in_gap_set(t) ? shifted_cos2(t) : 1.0; }
};

inline GapFunctions gap_functions(const EigenFrame& f, double sigma_boundary = 1.0) {
  const double d13 = f.l1() - f.l3();
  if (d13 <= degeneracy_tolerance(f)) throw DegenerateGap("l1 - l3 is below the degeneracy tolerance");
  const double c = std::sqrt(std::clamp((f.l1() - f.l2()) / d13, 0.0, 1.0));
  return GapFunctions{std::acos(c), sigma_boundary};
}

struct ThetaStars {
  double theta_star = 0.0;
  double theta_star_star = 0.0;
  double n_star = 0.0;
  double n_star_star = 0.0;
};

inline void require_nondegenerate(const EigenFrame& f) {
  if (gap12_degenerate(f) || gap23_degenerate(f))
    throw DegenerateGap("non-degenerate L- spectrum required");
}

/// The angles are evaluated in half-angle form, which reproduces the
/// (cos, sin) pairs for x1 x3 != 0 and their one-sided limits otherwise.
inline ThetaStars theta_stars(const EigenFrame& f) {
  require_nondegenerate(f);
  const double x1 = f.x_frame(0), x2 = f.x_frame(1), x3 = f.x_frame(2);
  const double d13 = f.l1() - f.l3();
  const double nx = f.x_norm2();
  ThetaStars t;
  const double b = d13 + nx - x2 * x2;
  t.n_star = std::sqrt(std::max(0.0, b * b - 4.0 * d13 * x3 * x3));
  t.n_star_star = x1 * x1 + x3 * x3;
  t.theta_star = -0.5 * std::atan2(2.0 * x1 * x3, d13 + x1 * x1 - x3 * x3);
  t.theta_star_star = -0.5 * std::atan2(2.0 * x1 * x3, x1 * x1 - x3 * x3);
  return t;
}

/// The angles straight from the printed cosine/sine expressions. Only
/// defined for x1 x3 != 0.
inline std::optional<std::pair<double, double>> theta_stars_printed(const EigenFrame& f) {
  const double x1 = f.x_frame(0), x3 = f.x_frame(2);
  if (x1 * x3 == 0.0) return std::nullopt;
  const ThetaStars t = theta_stars(f);
  const double a = f.l1() - f.l3() + x1 * x1 - x3 * x3;
  const double ns = t.n_star, nss = t.n_star_star;
  const double cs = std::sqrt(2.0) * std::abs(x1 * x3) / std::sqrt(ns * (ns - a));
  const double ss = -std::sqrt(2.0) * x1 * x3 / std::sqrt(ns * (ns + a));
  const double css = std::sqrt(2.0) * std::abs(x1 * x3) / std::sqrt(nss * (nss - x1 * x1 + x3 * x3));
  const double sss = -std::sqrt(2.0) * x1 * x3 / std::sqrt(nss * (nss + x1 * x1 - x3 * x3));
  return std::pair{std::atan2(ss, cs), std::atan2(sss, css)};
}

inline std::pair<double, double> mu_candidates(const EigenFrame& f, double sigma_boundary = 1.0) {
  const GapFunctions gap = gap_functions(f, sigma_boundary);
  const ThetaStars t = theta_stars(f);
  const double x2 = f.x_frame(1);
  const double nx = f.x_norm2();
  const double mu_star = 0.5 * (f.l1() + f.l3() + nx + x2 * x2 + t.n_star * (1.0 - 2.0 * gap.p(t.theta_star)));
  const double mu_star_star = f.l2() + nx - t.n_star_star * gap.r(t.theta_star_star);
  return {mu_star, mu_star_star};
}

inline Candidates candidates(const EigenFrame& f, double sigma_boundary = 1.0) {
  require_nondegenerate(f);
  const double l1 = f.l1(), l2 = f.l2();
  const double x1 = f.x_frame(0), x2 = f.x_frame(1), x3 = f.x_frame(2);
  const double nx = f.x_norm2();
  Candidates c;
  c.d1 = l1 + x1 * x1;
  const double b = l1 - l2 + nx - x3 * x3;
  c.d2 = 0.5 * (l1 + l2 + nx + x3 * x3 - std::sqrt(std::max(0.0, b * b - 4.0 * (l1 - l2) * x2 * x2)));
  std::tie(c.mu_star, c.mu_star_star) = mu_candidates(f, sigma_boundary);
  return c;
}

/// Squared discord for l2 = l3 with the sign inside the radical as printed.
/// Kept for comparison; it disagrees with direct minimization.
inline double degenerate23_printed(const EigenFrame& f) {
  const double d = f.l1() - f.l2(), nx = f.x_norm2(), x1 = f.x_frame(0);
  const double b = d + nx;
  return 0.5 * (f.l1() + f.l2() + nx - std::sqrt(b * b + 4.0 * d * x1 * x1));
}

/// Squared discord for l2 = l3: the l2 -> l3 limit of the v3 = 0 circle
/// minimum, taken in a frame where x has no third component.
inline double degenerate23_value(const EigenFrame& f) {
  const double d = f.l1() - f.l2(), nx = f.x_norm2(), x1 = f.x_frame(0);
  const double b = d - nx;
  return 0.5 * (f.l1() + f.l2() + nx - std::sqrt(b * b + 4.0 * d * x1 * x1));
}

// ---------------------------------------------------------------------------
// Big circles. Parametrization in the frame:
//   zero 1: v = (0, cos t, sin t);  zero 3: v = (cos t, sin t, 0);
//   zero 2: v = (cos t, 0, sin t).

inline Vector3 circle_point(int zero_index, double t) {
  const double c = std::cos(t), s = std::sin(t);
  switch (zero_index) {
    case 1: return {0.0, c, s};
    case 2: return {c, 0.0, s};
    case 3: return {c, s, 0.0};
  }
  throw std::invalid_argument("zero_index must be 1, 2 or 3");
}

/// ||S||_1^2 on a big circle, from the reduced one-variable expressions.
inline double circle_mu(const EigenFrame& f, int zero_index, double t) {
  const Vector3 v = circle_point(zero_index, t);
  const double xv = f.x_frame.dot(v);
  const double base = f.l2() + f.x_norm2();
  const double d12 = f.l1() - f.l2();
  switch (zero_index) {
    case 1: return d12 - xv * xv + base;
    case 3: return d12 * v(1) * v(1) - xv * xv + base;
    default: {
      const double q = d12 - (f.l1() - f.l3()) * v(0) * v(0);
      return 0.5 * (q + std::abs(q)) - xv * xv + base;
    }
  }
}

struct CircleMin {
  double mu = 0.0;
  Vector3 v_frame = Vector3::UnitX();
};

inline CircleMin circle_scan(const EigenFrame& f, int zero_index, double lo, double hi, int n, bool periodic) {
  const ScalarMin m = scan_minimize([&](double t) { return circle_mu(f, zero_index, t); }, lo, hi, n, periodic);
  return {m.value, circle_point(zero_index, m.arg)};
}

/// The two arcs of the v2 = 0 circle: on arc A the absolute value in the
/// reduced expression is active (that piece yields mu*), arc B is the rest
/// (mu**). Needs a non-degenerate outer gap.
inline std::pair<double, double> arc_a(const EigenFrame& f) {
  const double phi = gap_functions(f).phi_gap;
  return {phi, kPi - phi};
}
inline std::pair<double, double> arc_b(const EigenFrame& f) {
  const double phi = gap_functions(f).phi_gap;
  return {kPi - phi, kPi + phi};
}

// ---------------------------------------------------------------------------
// Minimizing axes (frame coordinates)

namespace detail {

/// Unit minimizer of v^T M v in the plane spanned by e_a, e_b.
inline Vector3 plane_min(const Eigen::Matrix2d& m, const Vector3& ea, const Vector3& eb) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const Eigen::Vector2d c = es.eigenvectors().col(0);
  return (c(0) * ea + c(1) * eb).normalized();
}

/// Best of the candidate angles on the v2 = 0 circle.
inline Vector3 best_on_circle2(const EigenFrame& f, std::initializer_list<double> angles) {
  double best = std::numeric_limits<double>::infinity();
  double arg = 0.0;
  for (double t : angles) {
    const double m = circle_mu(f, 2, t);
    if (m < best) {
      best = m;
      arg = t;
    }
  }
  return circle_point(2, arg);
}

inline bool in_arc(double t, double lo, double hi) {
  // Arc endpoints are given with lo in [0, pi]; compare modulo pi.
  double u = std::fmod(t - lo, kPi);
  if (u < 0) u += kPi;
  return u <= hi - lo;
}

}  // namespace detail

inline Vector3 axis_frame_for(const EigenFrame& f, Branch branch) {
  const double x1 = f.x_frame(0), x2 = f.x_frame(1), x3 = f.x_frame(2);
  const double d12 = f.l1() - f.l2();
  switch (branch) {
    case Branch::CircleV1: {
      const Vector3 v(0.0, x2, x3);
      return v.norm() > 1e-300 ? Vector3(v.normalized()) : Vector3(Vector3::UnitY());
    }
    case Branch::CircleV3: {
      Eigen::Matrix2d m;
      m << -x1 * x1, -x1 * x2, -x1 * x2, d12 - x2 * x2;
      return detail::plane_min(m, Vector3::UnitX(), Vector3::UnitY());
    }
    case Branch::CircleV2MuStar: {
      const auto [lo, hi] = arc_a(f);
      const double t0 = 0.5 * std::atan2(2.0 * x1 * x3, f.l1() - f.l3() + x1 * x1 - x3 * x3);
      if (detail::in_arc(t0, lo, hi)) return detail::best_on_circle2(f, {t0, lo, hi});
      return detail::best_on_circle2(f, {lo, hi});
    }
    case Branch::CircleV2MuStarStar: {
      const auto [lo, hi] = arc_b(f);
      const double t0 = std::atan2(x3, x1);
      if (detail::in_arc(t0, lo, hi)) return detail::best_on_circle2(f, {t0, lo, hi});
      return detail::best_on_circle2(f, {lo, hi});
    }
    case Branch::Degenerate23: {
      // Rotate inside the degenerate (e2, e3) plane so x has no e3 part.
      const Vector3 perp(0.0, x2, x3);
      const double xp = perp.norm();
      const Vector3 e2 = xp > 1e-300 ? Vector3(perp / xp) : Vector3(Vector3::UnitY());
      Eigen::Matrix2d m;
      m << -x1 * x1, -x1 * xp, -x1 * xp, d12 - xp * xp;
      return detail::plane_min(m, Vector3::UnitX(), e2);
    }
    case Branch::Degenerate12:
      if (f.x_frame.norm() > 1e-300) return f.x_frame.normalized();
      return Vector3::UnitZ();
    case Branch::FullyDegenerate:
      if (f.x_frame.norm() > 1e-300) return f.x_frame.normalized();
      return Vector3::UnitX();
  }
  return Vector3::UnitX();
}

// ---------------------------------------------------------------------------
// D1

struct D1Options {
  /// Cross-check every candidate against a numeric 1-D minimization of its
  /// circle (or arc) and throw InternalConsistencyError on mismatch.
  bool safety_net = true;
  int scan_points = 10000;
  double tolerance = 1e-8;
  double sigma_boundary = 1.0;
  /// Test-only: added to the named candidate before the minimum is taken.
  std::optional<std::pair<Branch, double>> corrupt;
};

/// Numeric 1-D minima matching each analytic candidate.
inline Candidates circle_minima(const EigenFrame& f, int n = 10000) {
  Candidates c;
  c.d1 = circle_scan(f, 1, 0.0, kPi, n, true).mu;
  c.d2 = circle_scan(f, 3, 0.0, kPi, n, true).mu;
  const auto [alo, ahi] = arc_a(f);
  const auto [blo, bhi] = arc_b(f);
  c.mu_star = circle_scan(f, 2, alo, ahi, n, false).mu;
  c.mu_star_star = circle_scan(f, 2, blo, bhi, n, false).mu;
  return c;
}

namespace detail {
inline void apply_corruption(Candidates& c, const D1Options& opt) {
  if (!opt.corrupt) return;
  const auto [b, delta] = *opt.corrupt;
  switch (b) {
    case Branch::CircleV1: c.d1 += delta; break;
    case Branch::CircleV3: c.d2 += delta; break;
    case Branch::CircleV2MuStar: c.mu_star += delta; break;
    case Branch::CircleV2MuStarStar: c.mu_star_star += delta; break;
    default: break;
  }
}
}  // namespace detail

inline DiscordResult discord_d1(const BlochForm& b, const D1Options& opt = {}) {
  DiscordResult res;
  res.frame = eigenframe(b);
  const EigenFrame& f = res.frame;
  res.d2_value = 0.5 * (f.l_plus_vals(0) + f.l_plus_vals(1));
  res.lower_bound = std::sqrt(std::max(0.0, res.d2_value));

  const bool deg12 = gap12_degenerate(f);
  const bool deg23 = gap23_degenerate(f);
  double value2 = 0.0;
  if (deg12 && deg23) {
    res.branch = Branch::FullyDegenerate;
    value2 = f.l2();
  } else if (deg12) {
    res.branch = Branch::Degenerate12;
    value2 = f.l2();
  } else if (deg23) {
    res.branch = Branch::Degenerate23;
    value2 = degenerate23_value(f);
  } else {
    Candidates c = candidates(f, opt.sigma_boundary);
    detail::apply_corruption(c, opt);
    if (opt.safety_net) {
      const Candidates num = circle_minima(f, opt.scan_points);
      const auto a = c.values(), n = num.values();
      static constexpr const char* names[] = {"d1", "d2", "mu*", "mu**"};
      for (int i = 0; i < 4; ++i) {
        if (std::abs(a[i] - n[i]) > opt.tolerance * std::max(1.0, std::abs(n[i]))) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "candidate " << names[i] << " = " << a[i] << " but circle minimum is " << n[i];
          throw InternalConsistencyError(msg.str());
        }
      }
    }
    res.candidates = c;
    const auto vals = c.values();
    static constexpr Branch order[] = {Branch::CircleV1, Branch::CircleV3, Branch::CircleV2MuStar,
                                       Branch::CircleV2MuStarStar};
    int best = 0;
    for (int i = 1; i < 4; ++i)
      if (vals[i] < vals[best] - 1e-12) best = i;
    res.branch = order[best];
    value2 = vals[best];
  }

  // Squared values within rounding of zero are zero; the square root would
  // otherwise turn eps-sized noise into ~1e-8.
  const double scale = std::max({std::abs(f.l1()), std::abs(f.l3()), f.x_norm2(), 1e-300});
  if (value2 <= 16.0 * std::numeric_limits<double>::epsilon() * scale) value2 = 0.0;
  res.d1_value = std::sqrt(value2);
  res.axis = MeasurementAxis(f.to_lab(axis_frame_for(f, res.branch)));
  const auto [g1, g2] = DisturbanceEvaluator(b).g(res.axis.v());
  res.axis_in_singular_set = singular_membership(g1, g2);
  return res;
}

}  // namespace qdisc
