#pragma once

// Brute-force minimization of ||S||_1 over the sphere and critical-point
// diagnostics, used to check the closed form independently.

#include "qdisc/discord.hpp"
#include "qdisc/disturbance.hpp"
#include "qdisc/search.hpp"

#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace qdisc {

struct OracleResult {
  double min_value = 0.0;
  MeasurementAxis argmin;
  int grid_size = 0;
  int refine_iters = 0;
  /// Refined value of the second-best basin minus the best one; empty when
  /// only one basin was found.
  std::optional<double> value_gap_estimate;
};

/// Lowest trace norm over an explicit list of axes (first index wins ties).
inline std::pair<double, std::size_t> grid_minimum(const BlochForm& b, std::span<const Vector3> points) {
  const DisturbanceEvaluator ev(b);
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double val = ev.norm(points[i]);
    if (val < best) {
      best = val;
      arg = i;
    }
  }
  return {best, arg};
}

namespace detail {

struct LocalRefine {
  Vector3 v;
  double value;
  int iters;
};

/// Golden-section line searches along six tangent directions (30 degrees
/// apart) of a chart centred at the current point, plus one along the net
/// step of each sweep. Two directions are not enough: at a kink of the
/// objective (singular-set minima) alternating coordinate searches stall.
inline LocalRefine refine_local(const DisturbanceEvaluator& ev, Vector3 v, double step, double tol, int max_iter) {
  double value = ev.norm2(v);
  int it = 0;
  auto line = [&](const Vector3& dir, double h) {
    auto f = [&](double s) { return ev.norm2((v + s * dir).normalized()); };
    ScalarMin m = golden_section(f, -h, h, tol * 0.1);
    // Bracket too small: the minimum sits on the edge; widen a few times.
    for (int k = 0; k < 6 && std::abs(std::abs(m.arg) - h) < 1e-3 * h && h < 1.0; ++k) {
      h *= 4.0;
      m = golden_section(f, -h, h, tol * 0.1);
    }
    if (m.value < value) {
      v = (v + m.arg * dir).normalized();
      value = m.value;
      return std::abs(m.arg);
    }
    return 0.0;
  };
  for (; it < max_iter; ++it) {
    const Vector3 start = v;
    double moved = 0.0;
    for (int k = 0; k < 6; ++k) {
      const auto [e1, e2] = orthonormal_complement(v);
      const double a = k * kPi / 6.0;
      moved = std::max(moved, line(std::cos(a) * e1 + std::sin(a) * e2, step));
    }
    const Vector3 net = v - start;
    if (net.norm() > 1e-300) {
      const Vector3 d = (net - net.dot(v) * v);
      if (d.norm() > 1e-300) moved = std::max(moved, line(d.normalized(), std::max(net.norm(), tol)));
    }
    step = std::max(4.0 * moved, tol);
    if (moved < tol) break;
  }
  return {v, value, it};
}

}  // namespace detail

struct GridOptions {
  int n_points = 20000;
  double refine_tol = 1e-10;
  int max_iter = 200;
  int basins = 8;
  /// Grid points closer than this angle (in radians, modulo v -> -v) belong to
  /// the same basin.
  double basin_separation = 0.15;
};

inline OracleResult minimize_grid(const BlochForm& b, const GridOptions& opt) {
  if (opt.n_points < 1000) throw std::invalid_argument("minimize_grid needs at least 1000 grid points");
  const DisturbanceEvaluator ev(b);
  const std::vector<Vector3> grid = fibonacci_sphere(opt.n_points);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = ev.norm2(grid[i]);

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return vals[a] < vals[c]; });

  const double cos_sep = std::cos(opt.basin_separation);
  std::vector<std::size_t> seeds;
  for (std::size_t idx : order) {
    bool fresh = true;
    for (std::size_t s : seeds)
      if (std::abs(grid[idx].dot(grid[s])) > cos_sep) {
        fresh = false;
        break;
      }
    if (fresh) seeds.push_back(idx);
    if (static_cast<int>(seeds.size()) >= opt.basins) break;
  }

  const double spacing = std::sqrt(2.0 * kPi / opt.n_points);
  OracleResult res;
  res.grid_size = opt.n_points;
  std::vector<double> refined;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s : seeds) {
    const auto r = detail::refine_local(ev, grid[s], 2.0 * spacing, opt.refine_tol, opt.max_iter);
    refined.push_back(std::sqrt(r.value));
    if (r.value < best) {
      best = r.value;
      res.argmin = MeasurementAxis(r.v).canonical();
      res.refine_iters = r.iters;
    }
  }
  res.min_value = ev.norm(res.argmin.v());
  std::sort(refined.begin(), refined.end());
  if (refined.size() >= 2) res.value_gap_estimate = refined[1] - refined[0];
  return res;
}

inline OracleResult minimize_grid(const BlochForm& b, int n_points = 20000, double refine_tol = 1e-10) {
  GridOptions opt;
  opt.n_points = n_points;
  opt.refine_tol = refine_tol;
  return minimize_grid(b, opt);
}

/// Minimum of ||S||_1^2 on the big circle whose `zero_index`-th frame
/// component vanishes. The axis is returned in lab coordinates.
inline std::pair<double, MeasurementAxis> minimize_circle(const BlochForm& b, const EigenFrame& frame, int zero_index,
                                                          int n = 10000) {
  (void)b;
  require_nondegenerate(frame);
  const CircleMin m = circle_scan(frame, zero_index, 0.0, kPi, n, true);
  return {m.mu, MeasurementAxis(frame.to_lab(m.v_frame))};
}

// ---------------------------------------------------------------------------
// Critical points

struct CriticalPointReport {
  MeasurementAxis v;
  double mu = 0.0;
  double omega = 0.0;
  double commutator_residual = 0.0;
  double eigen_residual = 0.0;
};

inline Matrix3 g_mu_matrix(const BlochForm& b, const MeasurementAxis& axis, double mu) {
  const Matrix3 kkt = b.K * b.K.transpose();
  const Matrix3 wx = rank_one(b.x);
  const Matrix3 m = axis.complement();
  const Matrix3 e = adjugate(b.K);
  return -wx * m * kkt - kkt * m * wx + e.transpose() * e + mu * (kkt + wx);
}

inline CriticalPointReport critical_residual(const BlochForm& b, const MeasurementAxis& axis) {
  CriticalPointReport r;
  r.v = axis;
  r.mu = DisturbanceEvaluator(b).norm2(axis.v());
  const Matrix3 g = g_mu_matrix(b, axis, r.mu);
  const Matrix3 p = axis.projector();
  r.omega = axis.v().dot(g * axis.v());
  r.commutator_residual = max_abs(Matrix3(g * p - p * g));
  r.eigen_residual = max_abs(Matrix3(g * p - r.omega * p));
  return r;
}

// ---------------------------------------------------------------------------
// Certification

struct CertifyOptions {
  GridOptions grid;
  double tol = 1e-6;
  bool throw_on_failure = false;
  D1Options d1;
};

struct CertificationReport {
  DiscordResult closed;
  OracleResult oracle;
  /// Per-circle minima of ||S||^2 (zero index 1, 2, 3); empty for a
  /// degenerate frame.
  std::optional<std::array<double, 3>> circle_minima;
  CriticalPointReport critical_closed;
  CriticalPointReport critical_oracle;
  double deviation = 0.0;
  double tol = 0.0;
  bool passed = false;

  std::string summary() const {
    std::ostringstream s;
    s.precision(12);
    s << "closed " << closed.d1_value << " (" << to_string(closed.branch) << "), oracle " << oracle.min_value
      << ", |diff| " << deviation << ", tol " << tol;
    return s.str();
  }
};

class CertificationFailure : public std::runtime_error {
 public:
  explicit CertificationFailure(CertificationReport report)
      : std::runtime_error("CertificationFailure: " + report.summary()), report_(std::move(report)) {}
  const CertificationReport& report() const noexcept { return report_; }

 private:
  CertificationReport report_;
};

inline CertificationReport certify(const BlochForm& b, const CertifyOptions& opt = {}) {
  CertificationReport r;
  r.tol = opt.tol;
  r.closed = discord_d1(b, opt.d1);
  r.oracle = minimize_grid(b, opt.grid);
  if (!gap12_degenerate(r.closed.frame) && !gap23_degenerate(r.closed.frame)) {
    std::array<double, 3> mins{};
    for (int z = 1; z <= 3; ++z) mins[static_cast<std::size_t>(z - 1)] = minimize_circle(b, r.closed.frame, z).first;
    r.circle_minima = mins;
  }
  r.critical_closed = critical_residual(b, r.closed.axis);
  r.critical_oracle = critical_residual(b, r.oracle.argmin);
  r.deviation = std::abs(r.closed.d1_value - r.oracle.min_value);
  r.passed = r.deviation <= opt.tol;
  if (!r.passed && opt.throw_on_failure) throw CertificationFailure(r);
  return r;
}

// ---------------------------------------------------------------------------
// Random inputs

/// G G^dagger / tr(G G^dagger) with G a 4x4 complex Ginibre matrix.
template <typename Rng>
TwoQubitState random_ginibre_state(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix4c g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = cplx(n(rng), n(rng));
  const Matrix4c rho = g * g.adjoint();
  return TwoQubitState{rho / rho.trace().real()};
}

/// Uniform rotation from a normalized Gaussian quaternion.
template <typename Rng>
Matrix3 random_rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace qdisc
