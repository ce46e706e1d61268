#pragma once

// Deterministic sampling and 1-D minimization helpers shared by the closed
// form's self-check and the brute-force oracle.

#include "qdisc/core.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace qdisc {

struct ScalarMin {
  double arg = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

/// Golden-section search on [lo, hi]. The bracket ends are evaluated too, so a
/// minimum sitting on the boundary is returned exactly.
template <typename F>
ScalarMin golden_section(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarMin best{0.5 * (a + b), f(0.5 * (a + b))};
  for (const auto& [t, ft] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{lo, f(lo)}, std::pair{hi, f(hi)}})
    if (ft < best.value) best = {t, ft};
  return best;
}

/// Dense scan of `n` equally spaced points on [lo, hi] followed by golden-section
/// refinement of the `basins` lowest local minima of the scan. With
/// `periodic` set, the function is assumed to have period (hi - lo) and
/// brackets may extend past the ends.
template <typename F>
ScalarMin scan_minimize(F&& f, double lo, double hi, int n, bool periodic = false,
                        double tol = 1e-12, int basins = 4) {
  n = std::max(n, 3);
  const double h = (hi - lo) / (periodic ? n : n - 1);
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) vals[static_cast<std::size_t>(k)] = f(lo + k * h);

  auto at = [&](int k) {
    if (periodic) k = (k % n + n) % n;
    return vals[static_cast<std::size_t>(k)];
  };
  std::vector<int> minima;
  for (int k = 0; k < n; ++k) {
    const bool left_ok = (!periodic && k == 0) || at(k) <= at(k - 1);
    const bool right_ok = (!periodic && k == n - 1) || at(k) <= at(k + 1);
    if (left_ok && right_ok) minima.push_back(k);
  }
  std::sort(minima.begin(), minima.end(), [&](int a, int b) { return at(a) < at(b); });
  if (minima.size() > static_cast<std::size_t>(basins)) minima.resize(static_cast<std::size_t>(basins));

  ScalarMin best;
  for (int k : minima) {
    double a = lo + (k - 1) * h;
    double b = lo + (k + 1) * h;
    if (!periodic) {
      a = std::max(a, lo);
      b = std::min(b, hi);
    }
    const ScalarMin m = golden_section(f, a, b, tol);
    if (m.value < best.value) best = m;
  }
  return best;
}

/// Quasi-uniform Fibonacci lattice on the unit sphere. With `hemisphere` set,
/// only z > 0 is covered (enough whenever v and -v are equivalent).
inline std::vector<Vector3> fibonacci_sphere(int n, bool hemisphere = true) {
  std::vector<Vector3> pts;
  pts.reserve(static_cast<std::size_t>(std::max(n, 0)));
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = hemisphere ? (i + 0.5) / n : 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

}  // namespace qdisc
