#pragma once

// Closed-form concentric solutions in the unit ball (n = 2 or 3): the
// capacitary flux Q(r), the fold (r*, Q*), the two branches r1(Q) < r* < r2(Q)
// and the radial linearized Robin problem.

#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include "bernoulli/errors.hpp"

namespace bernoulli::radial {

enum class Branch { Lower, Upper, Critical };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Lower: return "Lower";
    case Branch::Upper: return "Upper";
    case Branch::Critical: return "Critical";
  }
  return "?";
}

struct RadialBranchPoint {
  int n = 2;
  double r = 0.0;
  double Q = 0.0;
  Branch branch = Branch::Critical;
};

inline void check_dimension(int n) {
  if (n != 2 && n != 3) fail(ErrorKind::OutOfRange, "dimension must be 2 or 3");
}

/// Normal derivative of the capacitary potential of the ball B_r in B_1.
inline double radial_Q(double r, int n = 2) {
  check_dimension(n);
  if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::OutOfRange, "radius must lie in (0, 1)");
  if (n == 2) return -1.0 / (r * std::log(r));
  return (n - 2) / (r * (1.0 - std::pow(r, n - 2)));
}

/// d/dr of radial_Q.
inline double radial_Q_derivative(double r, int n = 2) {
  check_dimension(n);
  if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::OutOfRange, "radius must lie in (0, 1)");
  if (n == 2) {
    const double l = std::log(r);
    return (1.0 + l) / (r * r * l * l);
  }
  // Q = (n-2) / (r - r^{n-1})
  const double den = r - std::pow(r, n - 1);
  return -(n - 2) * (1.0 - (n - 1) * std::pow(r, n - 2)) / (den * den);
}

/// Fold point (r*, Q*) where Q(r) attains its minimum.
inline std::pair<double, double> critical(int n = 2) {
  check_dimension(n);
  const double r = n == 2 ? std::exp(-1.0) : std::pow(double(n - 1), -1.0 / (n - 2));
  return {r, radial_Q(r, n)};
}

struct BranchRoots {
  RadialBranchPoint lower;
  RadialBranchPoint upper;
};

namespace detail {
// Root of radial_Q(r) = q on [lo, hi] where radial_Q - q changes sign.
inline double refine_root(double q, double lo, double hi, int n) {
  double flo = radial_Q(lo, n) - q;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double fm = radial_Q(mid, n) - q;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double step = (radial_Q(r, n) - q) / radial_Q_derivative(r, n);
    double next = r - step;
    if (!(next > lo - 1e-6 && next < hi + 1e-6) || !std::isfinite(next)) break;
    r = next;
    if (std::abs(step) < 1e-15 * std::max(1.0, r)) break;
  }
  return r;
}
}  // namespace detail

/// Both concentric solutions for Q > Q*, the critical one at Q = Q*
/// (within 1e-12 relative), nothing below Q*.
inline std::optional<BranchRoots> radial_branch_roots(double q, int n = 2) {
  check_dimension(n);
  if (!(q > 0.0)) fail(ErrorKind::OutOfRange, "Q must be positive");
  const auto [rs, qs] = critical(n);
  if (std::abs(q - qs) <= 1e-12 * qs) {
    const RadialBranchPoint c{n, rs, qs, Branch::Critical};
    return BranchRoots{c, c};
  }
  if (q < qs) return std::nullopt;
  // radial_Q blows up at both ends of (0, 1); push the brackets until it exceeds q.
  double lo = rs * 0.5;
  while (radial_Q(lo, n) < q) lo *= 0.5;
  double hi = 1.0 - (1.0 - rs) * 0.5;
  while (radial_Q(hi, n) < q) hi = 1.0 - (1.0 - hi) * 0.5;
  const double r1 = detail::refine_root(q, lo, rs, n);
  const double r2 = detail::refine_root(q, rs, hi, n);
  return BranchRoots{{n, r1, radial_Q(r1, n), Branch::Lower}, {n, r2, radial_Q(r2, n), Branch::Upper}};
}

inline RadialBranchPoint branch_point(double r, int n = 2) {
  const double rs = critical(n).first;
  const Branch b = std::abs(r - rs) < 1e-12 ? Branch::Critical : (r < rs ? Branch::Lower : Branch::Upper);
  return {n, r, radial_Q(r, n), b};
}

struct RadialLinearized {
  double p_boundary = 0.0;  // p on |x| = r
  double integral_p = 0.0;  // 2 pi r p
};

/// Radial Robin problem (n = 2) with constant data phi: p = c log|x|,
/// c = -r phi / (1 + log r).
inline RadialLinearized radial_linearized(double r, double phi = 1.0) {
  if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::OutOfRange, "radius must lie in (0, 1)");
  const double l = std::log(r);
  if (std::abs(1.0 + l) < 1e-14) fail(ErrorKind::DegenerateRadius, "the critical radius has a one-dimensional kernel");
  const double c = -r * phi / (1.0 + l);
  const double p = c * l;
  return {p, 2.0 * std::numbers::pi * r * p};
}

}  // namespace bernoulli::radial
