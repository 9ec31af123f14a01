#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bernoulli/curve_geometry.hpp"
#include "bernoulli/errors.hpp"

namespace bernoulli {

/// Sign of dQ/dt that a schedule guarantees everywhere, when known.
enum class TimeSign { Zero, Positive, Negative, Mixed };

/// Prescribed data Q(x, t) > 0 together with its spatial gradient and time
/// derivative.
class QSchedule {
 public:
  using ValueFn = std::function<double(const Point&, double)>;
  using GradientFn = std::function<Point(const Point&, double)>;

  QSchedule(ValueFn value, GradientFn gradient, ValueFn time_derivative, TimeSign sign, int smoothness = 3)
      : value_(std::move(value)),
        gradient_(std::move(gradient)),
        dt_(std::move(time_derivative)),
        sign_(sign),
        smoothness_(smoothness) {}

  /// Q = q0 + q1 t.
  static QSchedule affine(double q0, double q1 = 0.0) { return linear(q0, q1, Point::Zero()); }
  static QSchedule constant(double q) { return affine(q, 0.0); }

  /// Q = (q0 + q1 t) (1 + g . x).
  static QSchedule linear(double q0, double q1, Point g) {
    auto amp = [q0, q1](double t) { return q0 + q1 * t; };
    return QSchedule([=](const Point& x, double t) { return amp(t) * (1.0 + g.dot(x)); },
                     [=](const Point&, double t) -> Point { return amp(t) * g; },
                     [=](const Point& x, double) { return q1 * (1.0 + g.dot(x)); }, sign_of(q1));
  }

  /// Q = (q0 + q1 t) S(x), S bilinear on a tensor grid (clamped outside).
  /// `values(i, j)` is S at (xs[i], ys[j]).
  static QSchedule table(double q0, double q1, std::vector<double> xs, std::vector<double> ys,
                         Eigen::MatrixXd values) {
    if (xs.size() < 2 || ys.size() < 2 || values.rows() != static_cast<long>(xs.size()) ||
        values.cols() != static_cast<long>(ys.size()))
      fail(ErrorKind::ConfigInvalid, "Q table shape does not match its axes");
    if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(ys.begin(), ys.end()))
      fail(ErrorKind::ConfigInvalid, "Q table axes must be increasing");
    auto grid = std::make_shared<const Bilinear>(Bilinear{std::move(xs), std::move(ys), std::move(values)});
    auto amp = [q0, q1](double t) { return q0 + q1 * t; };
    return QSchedule([=](const Point& x, double t) { return amp(t) * grid->value(x); },
                     [=](const Point& x, double t) -> Point { return amp(t) * grid->gradient(x); },
                     [=](const Point& x, double) { return q1 * grid->value(x); }, sign_of(q1), 0);
  }

  double value(const Point& x, double t) const { return value_(x, t); }
  Point gradient(const Point& x, double t) const { return gradient_(x, t); }
  double time_derivative(const Point& x, double t) const { return dt_(x, t); }
  TimeSign time_sign() const { return sign_; }
  int smoothness() const { return smoothness_; }

  /// The same schedule moved rigidly by `shift`.
  QSchedule translated(const Point& shift) const {
    auto v = value_;
    auto g = gradient_;
    auto d = dt_;
    return QSchedule([v, shift](const Point& x, double t) { return v(x - shift, t); },
                     [g, shift](const Point& x, double t) { return g(x - shift, t); },
                     [d, shift](const Point& x, double t) { return d(x - shift, t); }, sign_, smoothness_);
  }

  /// The same schedule rotated about the origin by alpha.
  QSchedule rotated(double alpha) const {
    auto v = value_;
    auto g = gradient_;
    auto d = dt_;
    const double c = std::cos(alpha), s = std::sin(alpha);
    auto back = [c, s](const Point& x) { return Point(c * x.x() + s * x.y(), -s * x.x() + c * x.y()); };
    return QSchedule([v, back](const Point& x, double t) { return v(back(x), t); },
                     [g, c, s, back](const Point& x, double t) {
                       const Point gb = g(back(x), t);
                       return Point(c * gb.x() - s * gb.y(), s * gb.x() + c * gb.y());
                     },
                     [d, back](const Point& x, double t) { return d(back(x), t); }, sign_, smoothness_);
  }

 private:
  struct Bilinear {
    std::vector<double> xs, ys;
    Eigen::MatrixXd v;

    static std::pair<int, double> locate(const std::vector<double>& axis, double x) {
      const double xc = std::clamp(x, axis.front(), axis.back());
      int i = static_cast<int>(std::upper_bound(axis.begin(), axis.end(), xc) - axis.begin()) - 1;
      i = std::clamp(i, 0, static_cast<int>(axis.size()) - 2);
      return {i, (xc - axis[i]) / (axis[i + 1] - axis[i])};
    }
    double value(const Point& p) const {
      auto [i, u] = locate(xs, p.x());
      auto [j, w] = locate(ys, p.y());
      return (1 - u) * (1 - w) * v(i, j) + u * (1 - w) * v(i + 1, j) + (1 - u) * w * v(i, j + 1) +
             u * w * v(i + 1, j + 1);
    }
    Point gradient(const Point& p) const {
      auto [i, u] = locate(xs, p.x());
      auto [j, w] = locate(ys, p.y());
      const double hx = xs[i + 1] - xs[i], hy = ys[j + 1] - ys[j];
      const double dx = ((1 - w) * (v(i + 1, j) - v(i, j)) + w * (v(i + 1, j + 1) - v(i, j + 1))) / hx;
      const double dy = ((1 - u) * (v(i, j + 1) - v(i, j)) + u * (v(i + 1, j + 1) - v(i + 1, j))) / hy;
      return {dx, dy};
    }
  };

  static TimeSign sign_of(double q1) {
    return q1 > 0 ? TimeSign::Positive : (q1 < 0 ? TimeSign::Negative : TimeSign::Zero);
  }

  ValueFn value_;
  GradientFn gradient_;
  ValueFn dt_;
  TimeSign sign_;
  int smoothness_;
};

/// Q and its normal/time derivatives sampled on the nodes of the inner curve.
struct QSnapshot {
  double t = 0.0;
  BoundaryField value;
  BoundaryField normal_derivative;  // grad Q . nu, nu pointing into A
  BoundaryField time_derivative;
};

inline QSnapshot snapshot(const QSchedule& q, const CurveSamples& inner, double t) {
  QSnapshot s;
  s.t = t;
  s.value.resize(inner.n);
  s.normal_derivative.resize(inner.n);
  s.time_derivative.resize(inner.n);
  for (int i = 0; i < inner.n; ++i) {
    const Point x(inner.points(i, 0), inner.points(i, 1));
    const Point nu(inner.normals(i, 0), inner.normals(i, 1));
    s.value[i] = q.value(x, t);
    s.normal_derivative[i] = q.gradient(x, t).dot(nu);
    s.time_derivative[i] = q.time_derivative(x, t);
  }
  return s;
}

}  // namespace bernoulli
