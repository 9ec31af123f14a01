#pragma once

// Star-shaped closed curves stored as a truncated Fourier series of the polar
// radius about a fixed center, and their sampled differential geometry.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bernoulli/errors.hpp"
#include "bernoulli/spectral.hpp"

namespace bernoulli {

using Point = Eigen::Vector2d;
using Complex = std::complex<double>;
/// Real samples on the collocation nodes of a single curve.
using BoundaryField = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Fourier coefficients of the polar radius: R = a0 + sum a_k cos k theta + b_k sin k theta.
struct FourierCoefficients {
  double a0 = 0.0;
  std::vector<double> cos;  // a_1..a_K
  std::vector<double> sin;  // b_1..b_K
};

class BoundaryCurve {
 public:
  /// Validating constructor. Throws NonStarShaped when R <= 0 on the probe
  /// grid and ResolutionTooLow when the last mode is not small against a0.
  BoundaryCurve(Point center, FourierCoefficients coeffs) : center_(std::move(center)), c_(std::move(coeffs)) {
    const int k = static_cast<int>(std::max(c_.cos.size(), c_.sin.size()));
    c_.cos.resize(k, 0.0);
    c_.sin.resize(k, 0.0);
    if (!std::isfinite(c_.a0) || !center_.allFinite()) fail(ErrorKind::NonStarShaped, "non-finite curve data");
    for (int i = 0; i < k; ++i)
      if (!std::isfinite(c_.cos[i]) || !std::isfinite(c_.sin[i]))
        fail(ErrorKind::NonStarShaped, "non-finite Fourier coefficient");
    if (c_.a0 <= 0.0) fail(ErrorKind::NonStarShaped, "a0 must be positive");
    const int probes = std::max(4 * k, 16);
    for (int i = 0; i < probes; ++i) {
      const double r = radius(two_pi * i / probes);
      if (!(r > 0.0))
        fail(ErrorKind::NonStarShaped, "polar radius " + std::to_string(r) + " at probe " + std::to_string(i));
    }
    if (k > 0 && std::hypot(c_.cos[k - 1], c_.sin[k - 1]) > 0.1 * c_.a0)
      fail(ErrorKind::ResolutionTooLow, "highest Fourier mode exceeds 0.1*a0");
  }

  static BoundaryCurve circle(Point center, double radius, int degree = 0) {
    FourierCoefficients c;
    c.a0 = radius;
    c.cos.assign(degree, 0.0);
    c.sin.assign(degree, 0.0);
    return BoundaryCurve(std::move(center), std::move(c));
  }

  const Point& center() const { return center_; }
  const FourierCoefficients& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.cos.size()); }

  double radius(double theta) const {
    double r = c_.a0;
    for (int k = 1; k <= degree(); ++k) r += c_.cos[k - 1] * std::cos(k * theta) + c_.sin[k - 1] * std::sin(k * theta);
    return r;
  }

  Point point(double theta) const {
    const double r = radius(theta);
    return center_ + r * Point(std::cos(theta), std::sin(theta));
  }

  /// Exact enclosed area from the coefficients.
  double area() const {
    double s = c_.a0 * c_.a0;
    for (int k = 0; k < degree(); ++k) s += 0.5 * (c_.cos[k] * c_.cos[k] + c_.sin[k] * c_.sin[k]);
    return pi * s;
  }

  double equivalent_radius() const { return std::sqrt(area() / pi); }

  bool contains(const Point& x) const {
    const Point d = x - center_;
    const double rho = d.norm();
    if (rho == 0.0) return true;
    return rho < radius(std::atan2(d.y(), d.x()));
  }

  BoundaryCurve translated(const Point& shift) const { return BoundaryCurve(center_ + shift, c_); }

  /// Rigid rotation by alpha about the origin.
  BoundaryCurve rotated(double alpha) const {
    FourierCoefficients c = c_;
    for (int k = 1; k <= degree(); ++k) {
      const double ca = std::cos(k * alpha), sa = std::sin(k * alpha);
      c.cos[k - 1] = c_.cos[k - 1] * ca - c_.sin[k - 1] * sa;
      c.sin[k - 1] = c_.cos[k - 1] * sa + c_.sin[k - 1] * ca;
    }
    const Point rc(std::cos(alpha) * center_.x() - std::sin(alpha) * center_.y(),
                   std::sin(alpha) * center_.x() + std::cos(alpha) * center_.y());
    return BoundaryCurve(rc, std::move(c));
  }

  /// Same center and degree, coefficients shifted by delta (degree of delta <= degree()).
  BoundaryCurve perturbed(const FourierCoefficients& delta, double scale = 1.0) const {
    FourierCoefficients c = c_;
    c.a0 += scale * delta.a0;
    for (std::size_t k = 0; k < delta.cos.size() && k < c.cos.size(); ++k) c.cos[k] += scale * delta.cos[k];
    for (std::size_t k = 0; k < delta.sin.size() && k < c.sin.size(); ++k) c.sin[k] += scale * delta.sin[k];
    return BoundaryCurve(center_, std::move(c));
  }

 private:
  Point center_;
  FourierCoefficients c_;
};

inline BoundaryCurve curve_from_fourier(const Point& center, const FourierCoefficients& coeffs) {
  return BoundaryCurve(center, coeffs);
}

/// Geometry sampled at theta_i = 2 pi i / N. Normals point toward the
/// curve's interior (the outer normal of the annulus when the curve is the
/// inner boundary). Curvature follows H = -kappa, so a circle of radius r
/// has H = -1/r.
struct CurveSamples {
  int n = 0;
  Point center = Point::Zero();
  Eigen::VectorXd theta;
  Eigen::VectorXd radius;      // R(theta_i)
  Eigen::VectorXd dradius;     // R'(theta_i)
  Eigen::MatrixX2d points;
  Eigen::MatrixX2d normals;    // inward unit normal
  Eigen::VectorXd speed;       // |dx/dtheta|
  Eigen::VectorXd curvature;   // H
  Eigen::VectorXd metric;      // g = R / sqrt(R^2 + R'^2)
  Eigen::VectorXcd z;          // points as complex numbers
  Eigen::VectorXcd dz;         // dz/dtheta
  Eigen::VectorXcd ddz;        // d^2z/dtheta^2

  double weight() const { return two_pi / n; }
  Complex normal_c(int i) const { return {normals(i, 0), normals(i, 1)}; }
  double length() const { return speed.sum() * weight(); }
  /// Largest node spacing along the curve.
  double spacing() const { return speed.maxCoeff() * weight(); }
};

inline int default_node_count(int degree) { return std::max(64, 8 * degree); }

inline CurveSamples sample_geometry(const BoundaryCurve& curve, int n) {
  if (n < 4 || n % 2 != 0) fail(ErrorKind::ResolutionTooLow, "node count must be even and >= 4");
  if (n < 4 * curve.degree()) fail(ErrorKind::ResolutionTooLow, "node count below 4K");

  CurveSamples s;
  s.n = n;
  s.center = curve.center();
  s.theta = spectral::nodes(n);
  s.radius.resize(n);
  for (int i = 0; i < n; ++i) s.radius[i] = curve.radius(s.theta[i]);
  s.dradius = spectral::derivative(s.radius);
  const Eigen::VectorXd d2 = spectral::derivative(s.dradius);

  s.points.resize(n, 2);
  s.normals.resize(n, 2);
  s.speed.resize(n);
  s.curvature.resize(n);
  s.metric.resize(n);
  s.z.resize(n);
  s.dz.resize(n);
  s.ddz.resize(n);
  const Complex c0(curve.center().x(), curve.center().y());
  for (int i = 0; i < n; ++i) {
    const double r = s.radius[i], r1 = s.dradius[i], r2 = d2[i];
    const Complex e = std::polar(1.0, s.theta[i]);
    const Complex I(0.0, 1.0);
    s.z[i] = c0 + r * e;
    s.dz[i] = (r1 + I * r) * e;
    s.ddz[i] = (r2 - r + 2.0 * I * r1) * e;
    s.points(i, 0) = s.z[i].real();
    s.points(i, 1) = s.z[i].imag();
    const double sp = std::hypot(r, r1);
    s.speed[i] = sp;
    // counterclockwise tangent rotated by +90 degrees points inward
    const Complex nu = I * s.dz[i] / sp;
    s.normals(i, 0) = nu.real();
    s.normals(i, 1) = nu.imag();
    const double kappa = (r * r + 2.0 * r1 * r1 - r * r2) / (sp * sp * sp);
    s.curvature[i] = -kappa;
    s.metric[i] = r / sp;
  }
  return s;
}

inline CurveSamples sample_geometry(const BoundaryCurve& curve) {
  return sample_geometry(curve, default_node_count(curve.degree()));
}

/// Converts a radial rate R' into normal speed: V = R' * g.
inline BoundaryField metric_factor(const CurveSamples& samples) { return samples.metric; }

/// Periodic trapezoid rule sum_i f_i s_i (2 pi / N).
inline double integrate_boundary(const CurveSamples& samples, const BoundaryField& f) {
  if (f.size() != samples.n) fail(ErrorKind::GridMismatch, "field size does not match the curve's node count");
  return f.dot(samples.speed) * samples.weight();
}

/// Samples a point function on the nodes of a curve.
template <class Fn>
BoundaryField sample_field(const CurveSamples& samples, Fn&& fn) {
  BoundaryField f(samples.n);
  for (int i = 0; i < samples.n; ++i) f[i] = fn(Point(samples.points(i, 0), samples.points(i, 1)));
  return f;
}

/// Projects nodal values onto a Fourier series of the given degree.
inline FourierCoefficients fourier_coefficients(const BoundaryField& samples, int degree) {
  const auto t = spectral::trig_coefficients(samples, degree);
  return {t.a0, t.cos, t.sin};
}

}  // namespace bernoulli
