#pragma once

#include <random>

#include "bernoulli/bernoulli_operator.hpp"
#include "bernoulli/radial_oracle.hpp"

namespace fixtures {

using namespace bernoulli;

inline const BoundaryCurve& unit_disk() {
  static const BoundaryCurve c = BoundaryCurve::circle(Point::Zero(), 1.0);
  return c;
}

/// Concentric state at radius r evaluated against `q` (default: the radial flux at r).
inline SolutionState radial_state(double r, int n = 128, std::optional<double> q = std::nullopt) {
  const double qv = q ? *q : radial::radial_Q(r);
  return eval_F(AnnularDomain(unit_disk(), seed_circle(Point::Zero(), r, n), n), QSchedule::constant(qv), 0.0);
}

inline SolutionState solved(double seed_r, const QSchedule& q, int n = 128, double t = 0.0) {
  return newton_correct(eval_F(AnnularDomain(unit_disk(), seed_circle(Point::Zero(), seed_r, n), n), q, t));
}

/// Smooth random field with decaying modes up to `degree`.
inline BoundaryField smooth_field(const CurveSamples& s, std::mt19937& rng, int degree, double amp = 1.0) {
  std::normal_distribution<double> g;
  BoundaryField f = BoundaryField::Constant(s.n, amp * g(rng));
  for (int k = 1; k <= degree; ++k) {
    const double a = amp * g(rng) / (k * k), b = amp * g(rng) / (k * k);
    for (int i = 0; i < s.n; ++i) f[i] += a * std::cos(k * s.theta[i]) + b * std::sin(k * s.theta[i]);
  }
  return f;
}

/// Random Fourier direction of the given degree with decaying modes.
inline FourierCoefficients random_direction(std::mt19937& rng, int degree, double amp = 1.0) {
  std::normal_distribution<double> g;
  FourierCoefficients d{amp * g(rng), std::vector<double>(degree), std::vector<double>(degree)};
  for (int k = 1; k <= degree; ++k) {
    d.cos[k - 1] = amp * g(rng) / (k * k);
    d.sin[k - 1] = amp * g(rng) / (k * k);
  }
  return d;
}

inline BoundaryField direction_field(const CurveSamples& s, const FourierCoefficients& d) {
  BoundaryField f = BoundaryField::Constant(s.n, d.a0);
  for (std::size_t k = 1; k <= d.cos.size(); ++k)
    for (int i = 0; i < s.n; ++i) f[i] += d.cos[k - 1] * std::cos(k * s.theta[i]) + d.sin[k - 1] * std::sin(k * s.theta[i]);
  return f;
}

}  // namespace fixtures
