#pragma once

// Helpers for the qdisc command line tool: numeric expressions in flags,
// sweep ranges, ordered parallel maps and the certification fixtures.

#include "qdisc/families.hpp"
#include "qdisc/oracle.hpp"

#include <atomic>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qdisc::cli {

/// Parses a signed product/quotient of numbers and "pi", e.g. "-1/3",
/// "pi/2", "3*pi/4", "0.25".
inline double parse_value(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("empty number");
  std::size_t pos = 0;
  double sign = 1.0;
  while (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
    if (s[pos] == '-') sign = -sign;
    ++pos;
  }
  auto factor = [&]() -> double {
    if (s.compare(pos, 2, "pi") == 0) {
      pos += 2;
      return kPi;
    }
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse number '" + text + "'");
    }
    pos += used;
    return v;
  };
  double value = factor();
  while (pos < s.size()) {
    const char op = s[pos++];
    if (op == '*') value *= factor();
    else if (op == '/') value /= factor();
    else throw std::invalid_argument("cannot parse number '" + text + "'");
  }
  return sign * value;
}

struct Range {
  std::string param;
  double lo = 0.0, hi = 0.0, step = 0.0;

  std::vector<double> values() const {
    std::vector<double> out;
    if (step <= 0.0) {
      out.push_back(lo);
      return out;
    }
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
  }
};

/// "P=a:b:step" or "P=a:b" (step 0 means just a).
inline Range parse_range(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("range '" + text + "' must look like P=a:b:step");
  Range r;
  r.param = text.substr(0, eq);
  std::vector<std::string> parts;
  std::string rest = text.substr(eq + 1), cur;
  for (char c : rest) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("range '" + text + "' must look like P=a:b:step");
  r.lo = parse_value(parts[0]);
  r.hi = parse_value(parts[1]);
  r.step = parts.size() == 3 ? parse_value(parts[2]) : 0.0;
  if (r.step < 0.0) throw std::invalid_argument("range step must be positive");
  return r;
}

/// "P=v"
inline std::pair<std::string, double> parse_fixed(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("fixed parameter '" + text + "' must look like P=v");
  return {text.substr(0, eq), parse_value(text.substr(eq + 1))};
}

/// Applies f to 0..n-1 on `jobs` threads; results come back in index order.
template <typename T>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) out[i] = f(i);
    });
  for (auto& th : pool) th.join();
  return out;
}

inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Fixture {
  std::string name;
  BlochForm bloch;
  double expected;  // known D1
};

/// Family states with known discord values.
inline std::vector<Fixture> fixtures() {
  std::vector<Fixture> f;
  auto add = [&](std::string name, const TwoQubitState& s, double expected) {
    f.push_back({std::move(name), to_bloch(s), expected});
  };
  add("werner(-0.7)", werner(-0.7), 0.7);
  add("werner(0.3)", werner(0.3), 0.3);
  add("isotropic(0.5)", isotropic(0.5), 0.5);
  add("pure_n(0.6)", pure_n(0.6), 0.6);
  add("rho_theta(pi/3)", rho_theta(kPi / 3), 0.5 * std::sin(2 * kPi / 3));
  add("rho_theta(pi/6)", rho_theta(kPi / 6), 0.5 * std::sin(kPi / 3));
  add("bell_diagonal(0.5,-0.3,0.2)", bell_diagonal(0.5, -0.3, 0.2), 0.3);
  add("quantum_classical(0.4,0.1,0.3)", quantum_classical(0.4, 0.1, 0.3), 0.12 / std::sqrt(0.25 + 0.09));
  {
    const double a = 0.5 * max_a(0.5);
    add("beyond_x(0.5,a)", beyond_x(0.5, a), 2.0 * a);
  }
  {
    // x along the smallest L- eigenvector; value sqrt(l1) or the second piece.
    const TwoQubitState s = x_state(0.4, 0.1, 0.2, 0.3, 0.3, 0.1);
    const BlochForm b = to_bloch(s);
    const EigenFrame fr = eigenframe(b);
    const double l1 = fr.l1(), l2 = fr.l2(), l3 = fr.l3(), nx = fr.x_norm2();
    const double v = l1 <= l3 + nx ? std::sqrt(l1) : std::sqrt((l1 * (l2 + nx) - l2 * (l3 + nx)) / (l1 - l3));
    add("x_state(0.4,0.1,0.2,0.3,0.3,0.1)", s, v);
  }
  return f;
}

}  // namespace qdisc::cli
