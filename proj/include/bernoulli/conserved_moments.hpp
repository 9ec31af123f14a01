#pragma once

// Harmonic functions of the punctured unit disk that vanish on the unit
// circle, the Q-weighted boundary moments they define, and the quadrature
// identity residual.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bernoulli/bernoulli_operator.hpp"
#include "bernoulli/curve_geometry.hpp"
#include "bernoulli/errors.hpp"

namespace bernoulli {

enum class Parity { Cos, Sin };

/// H_0 = log|x| and H_k = (r^k - r^-k) times cos or sin of k theta, evaluated
/// as Re(z^k - z^-k) and Im(z^k + z^-k).
struct HarmonicTestFunction {
  int k = 0;
  Parity parity = Parity::Cos;

  std::string label() const {
    if (k == 0) return "m_0";
    return "m_" + std::to_string(k) + (parity == Parity::Cos ? "c" : "s");
  }

  double value(const Point& x) const {
    const Complex z(x.x(), x.y());
    if (k == 0) return std::log(std::abs(z));
    const Complex zk = std::pow(z, k), zmk = 1.0 / zk;
    return parity == Parity::Cos ? (zk - zmk).real() : (zk + zmk).imag();
  }

  Point gradient(const Point& x) const {
    const Complex z(x.x(), x.y());
    if (k == 0) {
      const Complex d = 1.0 / z;
      return {d.real(), -d.imag()};
    }
    const Complex zk1 = std::pow(z, k - 1), zmk1 = 1.0 / (zk1 * z * z);
    if (parity == Parity::Cos) {
      const Complex d = double(k) * (zk1 + zmk1);
      return {d.real(), -d.imag()};
    }
    const Complex d = double(k) * (zk1 - zmk1);
    return {d.imag(), d.real()};
  }
};

/// Monopole followed by (cos, sin) pairs for k = 1..k_max.
inline std::vector<HarmonicTestFunction> harmonic_test_basis(int k_max = 8) {
  if (k_max < 0) fail(ErrorKind::OutOfRange, "k_max must be non-negative");
  std::vector<HarmonicTestFunction> basis{{0, Parity::Cos}};
  for (int k = 1; k <= k_max; ++k) {
    basis.push_back({k, Parity::Cos});
    basis.push_back({k, Parity::Sin});
  }
  return basis;
}

struct MomentVector {
  double t = 0.0;
  std::vector<HarmonicTestFunction> basis;
  std::vector<double> values;

  double max_drift(const MomentVector& ref) const {
    if (ref.values.size() != values.size()) fail(ErrorKind::GridMismatch, "moment vectors differ in length");
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) d = std::max(d, std::abs(values[i] - ref.values[i]));
    return d;
  }
};

inline void require_origin_enclosed(const SolutionState& state) {
  if (!state.inner().contains(Point::Zero()))
    fail(ErrorKind::OriginNotEnclosed, "the inner curve does not enclose the origin");
}

/// m_h = int Q h dsigma over the inner curve.
inline MomentVector moments(const SolutionState& state, const std::vector<HarmonicTestFunction>& basis) {
  require_origin_enclosed(state);
  const auto& s = state.inner_samples();
  MomentVector m{state.t(), basis, {}};
  m.values.reserve(basis.size());
  for (const auto& h : basis) {
    const BoundaryField hv = sample_field(s, [&](const Point& x) { return h.value(x); });
    m.values.push_back(integrate_boundary(s, state.q.value.cwiseProduct(hv)));
  }
  return m;
}

inline MomentVector moments(const SolutionState& state, int k_max = 8) {
  return moments(state, harmonic_test_basis(k_max));
}

/// int Q h dsigma - int dh/dnu dsigma, nu pointing into the inner domain.
inline double quadrature_residual(const SolutionState& state, const std::function<double(const Point&)>& h,
                                  const std::function<Point(const Point&)>& grad_h) {
  const auto& s = state.inner_samples();
  BoundaryField integrand(s.n);
  for (int i = 0; i < s.n; ++i) {
    const Point x(s.points(i, 0), s.points(i, 1));
    const Point nu(s.normals(i, 0), s.normals(i, 1));
    integrand[i] = state.q.value[i] * h(x) - grad_h(x).dot(nu);
  }
  return integrate_boundary(s, integrand);
}

inline double quadrature_residual(const SolutionState& state, const HarmonicTestFunction& h) {
  require_origin_enclosed(state);
  return quadrature_residual(
      state, [&h](const Point& x) { return h.value(x); }, [&h](const Point& x) { return h.gradient(x); });
}

/// Largest |quadrature residual| over a basis.
inline double max_quadrature_residual(const SolutionState& state, const std::vector<HarmonicTestFunction>& basis) {
  double worst = 0.0;
  for (const auto& h : basis) worst = std::max(worst, std::abs(quadrature_residual(state, h)));
  return worst;
}

}  // namespace bernoulli
