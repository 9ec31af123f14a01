#pragma once

// Second-kind boundary integral solver for the Laplacian on the annular
// region between an outer container curve and an inner curve.
//
// Representation: u = D[sigma] + beta * log|x - c|, where D is the double
// layer over both curves (positively oriented with respect to the annulus)
// and c is the inner curve's center. The inner density is constrained to
// have zero mean, which removes the null vector of the double layer on the
// doubly connected region; beta carries the flux around the hole.
//
// D[sigma] is the real part of the Cauchy integral
//   f(z) = sum_curves o_c/(2 pi i) \int sigma zeta'/(zeta - z) dtheta,
// so the gradient trace follows from f'(z) = sum o_c/(2 pi i) \int sigma'/(zeta - z),
// evaluated on the curve with a difference-quotient subtraction. This keeps
// the normal derivative spectrally accurate without any hypersingular kernel.

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "bernoulli/curve_geometry.hpp"
#include "bernoulli/errors.hpp"
#include "bernoulli/spectral.hpp"

namespace bernoulli {

namespace bie_defaults {
inline constexpr double min_separation = 0.02;
inline constexpr double degenerate_margin = 1e-10;
inline constexpr double guard_spacings = 5.0;
}  // namespace bie_defaults

struct AnnularDomain {
  BoundaryCurve outer;
  BoundaryCurve inner;
  CurveSamples outer_samples;
  CurveSamples inner_samples;

  AnnularDomain(BoundaryCurve outer_curve, BoundaryCurve inner_curve, int n_out, int n_in)
      : outer(std::move(outer_curve)),
        inner(std::move(inner_curve)),
        outer_samples(sample_geometry(outer, n_out)),
        inner_samples(sample_geometry(inner, n_in)) {
    validate();
  }

  AnnularDomain(BoundaryCurve outer_curve, BoundaryCurve inner_curve, int n)
      : AnnularDomain(std::move(outer_curve), std::move(inner_curve), n, n) {}

  /// Same container and resolution, new inner curve.
  AnnularDomain with_inner(BoundaryCurve new_inner) const {
    return AnnularDomain(outer, std::move(new_inner), outer_samples.n, inner_samples.n);
  }

  /// Smallest distance between an inner node and an outer node.
  double separation() const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inner_samples.n; ++i)
      for (int j = 0; j < outer_samples.n; ++j)
        best = std::min(best, std::abs(inner_samples.z[i] - outer_samples.z[j]));
    return best;
  }

 private:
  void validate() const {
    for (int i = 0; i < inner_samples.n; ++i) {
      const Point x(inner_samples.points(i, 0), inner_samples.points(i, 1));
      if (!outer.contains(x)) fail(ErrorKind::BoundaryTooClose, "inner curve leaves the container");
    }
    if (!outer.contains(inner.center()))
      fail(ErrorKind::BoundaryTooClose, "inner center outside the container");
    if (separation() <= bie_defaults::min_separation)
      fail(ErrorKind::BoundaryTooClose, "inner and outer curves closer than the grid guard");
  }
};

/// Assembled and factorized boundary integral system of one domain. The
/// unknown vector is [sigma_outer; sigma_inner; beta].
class BieOperator {
 public:
  explicit BieOperator(AnnularDomain domain) : domain_(std::move(domain)) {
    assemble();
    lu_.compute(matrix_);
    if (!(lu_.rcond() > 1e-14)) fail(ErrorKind::SingularSystem, "boundary integral matrix is numerically singular");
    build_gradient_traces();
  }

  BieOperator(const BieOperator&) = delete;
  BieOperator& operator=(const BieOperator&) = delete;

  const AnnularDomain& domain() const { return domain_; }
  int n_outer() const { return domain_.outer_samples.n; }
  int n_inner() const { return domain_.inner_samples.n; }
  int size() const { return n_outer() + n_inner() + 1; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// Densities for Dirichlet data (outer trace, inner trace).
  Eigen::VectorXd solve_dirichlet(const BoundaryField& outer_data, const BoundaryField& inner_data) const {
    if (outer_data.size() != n_outer() || inner_data.size() != n_inner())
      fail(ErrorKind::GridMismatch, "Dirichlet data size mismatch");
    Eigen::VectorXd rhs(size());
    rhs << outer_data, inner_data, 0.0;
    return lu_.solve(rhs);
  }

  /// Boundary traces of the representation (the discrete operator applied to x).
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix_ * x; }

  /// Complex gradient u_x - i u_y on the inner (or outer) nodes.
  Eigen::VectorXcd gradient_inner(const Eigen::VectorXd& x) const { return grad_inner_ * x; }
  Eigen::VectorXcd gradient_outer(const Eigen::VectorXd& x) const { return grad_outer_ * x; }

  /// du/dnu on the inner curve, nu pointing into A.
  BoundaryField normal_derivative_inner(const Eigen::VectorXd& x) const { return dn_inner_ * x; }

  /// du/dn on the outer curve, n the outward normal of the container.
  BoundaryField normal_derivative_outer(const Eigen::VectorXd& x) const {
    const Eigen::VectorXcd g = gradient_outer(x);
    BoundaryField out(n_outer());
    for (int i = 0; i < n_outer(); ++i) out[i] = -(g[i] * domain_.outer_samples.normal_c(i)).real();
    return out;
  }

  /// Dirichlet-to-Neumann matrix on the inner curve for data vanishing on the
  /// outer curve. Computed on first use.
  const Eigen::MatrixXd& dirichlet_to_neumann() const {
    std::call_once(dtn_once_, [this] {
      Eigen::MatrixXd embed = Eigen::MatrixXd::Zero(size(), n_inner());
      for (int i = 0; i < n_inner(); ++i) embed(n_outer() + i, i) = 1.0;
      dtn_ = dn_inner_ * lu_.solve(embed);
    });
    return dtn_;
  }

  /// Off-boundary value of the representation with unknowns x.
  double value_at(const Eigen::VectorXd& x, const Point& p) const {
    const Complex zp(p.x(), p.y());
    double u = 0.0;
    int offset = 0;
    for (const auto* s : {&domain_.outer_samples, &domain_.inner_samples}) {
      const double o = (s == &domain_.outer_samples) ? 1.0 : -1.0;
      for (int j = 0; j < s->n; ++j) u += o * (s->dz[j] / (s->z[j] - zp)).imag() / s->n * x[offset + j];
      offset += s->n;
    }
    const Point c = domain_.inner.center();
    u += x[size() - 1] * std::log((p - c).norm());
    return u;
  }

  /// Off-boundary complex gradient u_x - i u_y.
  Complex gradient_at(const Eigen::VectorXd& x, const Point& p) const {
    const Complex zp(p.x(), p.y());
    const Complex I(0.0, 1.0);
    Complex f = 0.0;
    int offset = 0;
    for (const auto* s : {&domain_.outer_samples, &domain_.inner_samples}) {
      const double o = (s == &domain_.outer_samples) ? 1.0 : -1.0;
      const Eigen::VectorXd dsigma = spectral::derivative(Eigen::VectorXd(x.segment(offset, s->n)));
      for (int j = 0; j < s->n; ++j) f += o / (I * double(s->n)) * dsigma[j] / (s->z[j] - zp);
      offset += s->n;
    }
    const Point c = domain_.inner.center();
    f += x[size() - 1] / (zp - Complex(c.x(), c.y()));
    return f;
  }

  /// Distance from p to the nearest node of either curve, in units of that curve's spacing.
  double guard_distance(const Point& p) const {
    double best = std::numeric_limits<double>::infinity();
    const Complex zp(p.x(), p.y());
    for (const auto* s : {&domain_.outer_samples, &domain_.inner_samples}) {
      double d = std::numeric_limits<double>::infinity();
      for (int j = 0; j < s->n; ++j) d = std::min(d, std::abs(s->z[j] - zp));
      best = std::min(best, d / s->spacing());
    }
    return best;
  }

  bool in_annulus(const Point& p) const { return domain_.outer.contains(p) && !domain_.inner.contains(p); }

 private:
  void assemble() {
    const auto& so = domain_.outer_samples;
    const auto& si = domain_.inner_samples;
    const int no = so.n, ni = si.n, n = no + ni + 1;
    matrix_ = Eigen::MatrixXd::Zero(n, n);
    const CurveSamples* curves[2] = {&so, &si};
    const int offsets[2] = {0, no};
    const double orient[2] = {1.0, -1.0};
    for (int a = 0; a < 2; ++a) {
      const auto& ta = *curves[a];
      for (int i = 0; i < ta.n; ++i) {
        const int row = offsets[a] + i;
        matrix_(row, row) += 0.5;
        for (int b = 0; b < 2; ++b) {
          const auto& sb = *curves[b];
          const double scale = orient[b] / sb.n;
          for (int j = 0; j < sb.n; ++j) {
            double k;
            if (a == b && i == j)
              k = 0.5 * (sb.ddz[j] / sb.dz[j]).imag();
            else
              k = (sb.dz[j] / (sb.z[j] - ta.z[i])).imag();
            matrix_(row, offsets[b] + j) += scale * k;
          }
        }
        const Point x(ta.points(i, 0), ta.points(i, 1));
        matrix_(row, n - 1) = std::log((x - domain_.inner.center()).norm());
      }
    }
    for (int j = 0; j < ni; ++j) matrix_(n - 1, no + j) = si.speed[j] * si.weight();
  }

  // Complex matrix mapping the unknowns to f'(z) = u_x - i u_y on target curve `a`.
  Eigen::MatrixXcd gradient_trace(int a) const {
    const auto& so = domain_.outer_samples;
    const auto& si = domain_.inner_samples;
    const CurveSamples* curves[2] = {&so, &si};
    const int offsets[2] = {0, so.n};
    const double orient[2] = {1.0, -1.0};
    const Complex I(0.0, 1.0);
    const auto& ta = *curves[a];
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ta.n, size());
    for (int b = 0; b < 2; ++b) {
      const auto& sb = *curves[b];
      const Complex pre = orient[b] / (I * double(sb.n));
      // sigma -> g = sigma' / zeta'
      const Eigen::MatrixXd d = spectral::derivative_matrix(sb.n);
      const Eigen::MatrixXcd g = sb.dz.cwiseInverse().asDiagonal() * d.cast<Complex>();
      Eigen::MatrixXcd s(ta.n, sb.n);
      for (int i = 0; i < ta.n; ++i) {
        Complex diag = 0.0;
        for (int j = 0; j < sb.n; ++j) {
          if (a == b && i == j) continue;
          const Complex kij = pre * sb.dz[j] / (sb.z[j] - ta.z[i]);
          s(i, j) = kij;
          diag -= kij;
        }
        if (a == b) s(i, i) = 0.5 * (1.0 + orient[b]) + diag;
      }
      Eigen::MatrixXcd block = s * g;
      if (a == b) block += pre * (d.cast<Complex>() * g);
      out.middleCols(offsets[b], sb.n) = block;
    }
    const Complex c(domain_.inner.center().x(), domain_.inner.center().y());
    for (int i = 0; i < ta.n; ++i) out(i, size() - 1) = 1.0 / (ta.z[i] - c);
    return out;
  }

  void build_gradient_traces() {
    grad_outer_ = gradient_trace(0);
    grad_inner_ = gradient_trace(1);
    const auto& si = domain_.inner_samples;
    dn_inner_.resize(si.n, size());
    for (int i = 0; i < si.n; ++i) dn_inner_.row(i) = (si.normal_c(i) * grad_inner_.row(i)).real();
  }

  AnnularDomain domain_;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::MatrixXcd grad_outer_;
  Eigen::MatrixXcd grad_inner_;
  Eigen::MatrixXd dn_inner_;
  mutable std::once_flag dtn_once_;
  mutable Eigen::MatrixXd dtn_;
};

/// Harmonic function on the annulus given by a factorized operator and its
/// unknowns. Immutable; safe to evaluate concurrently.
class PotentialSolution {
 public:
  PotentialSolution(std::shared_ptr<const BieOperator> op, Eigen::VectorXd unknowns, Eigen::VectorXd rhs)
      : op_(std::move(op)), x_(std::move(unknowns)), rhs_(std::move(rhs)) {}

  const BieOperator& op() const { return *op_; }
  std::shared_ptr<const BieOperator> op_ptr() const { return op_; }
  const AnnularDomain& domain() const { return op_->domain(); }
  const Eigen::VectorXd& unknowns() const { return x_; }
  double log_strength() const { return x_[x_.size() - 1]; }
  Eigen::VectorXd density_outer() const { return x_.head(op_->n_outer()); }
  Eigen::VectorXd density_inner() const { return x_.segment(op_->n_outer(), op_->n_inner()); }

  BoundaryField trace_inner() const { return op_->apply(x_).segment(op_->n_outer(), op_->n_inner()); }
  BoundaryField trace_outer() const { return op_->apply(x_).head(op_->n_outer()); }
  BoundaryField normal_derivative_inner() const { return op_->normal_derivative_inner(x_); }
  BoundaryField normal_derivative_outer() const { return op_->normal_derivative_outer(x_); }

  /// Max-norm residual of the discrete boundary conditions.
  double dirichlet_residual() const { return (op_->apply(x_) - rhs_).lpNorm<Eigen::Infinity>(); }

  double value(const Point& p) const {
    check_point(p);
    return op_->value_at(x_, p);
  }
  Point gradient(const Point& p) const {
    check_point(p);
    const Complex f = op_->gradient_at(x_, p);
    return {f.real(), -f.imag()};
  }

 private:
  void check_point(const Point& p) const {
    if (!op_->in_annulus(p)) fail(ErrorKind::TooCloseToBoundary, "evaluation point outside the annulus");
    if (op_->guard_distance(p) <= bie_defaults::guard_spacings)
      fail(ErrorKind::TooCloseToBoundary, "evaluation point within 5 grid spacings of a boundary");
  }

  std::shared_ptr<const BieOperator> op_;
  Eigen::VectorXd x_;
  Eigen::VectorXd rhs_;
};

inline PotentialSolution solve_dirichlet(std::shared_ptr<const BieOperator> op, const BoundaryField& outer_data,
                                         const BoundaryField& inner_data) {
  Eigen::VectorXd x = op->solve_dirichlet(outer_data, inner_data);
  Eigen::VectorXd rhs(op->size());
  rhs << outer_data, inner_data, 0.0;
  return PotentialSolution(std::move(op), std::move(x), std::move(rhs));
}

/// Capacitary potential: u = 0 on the container, u = 1 on the inner curve.
inline PotentialSolution solve_capacitary(std::shared_ptr<const BieOperator> op) {
  const BoundaryField zero = BoundaryField::Zero(op->n_outer());
  const BoundaryField one = BoundaryField::Ones(op->n_inner());
  PotentialSolution sol = solve_dirichlet(std::move(op), zero, one);
  if (!(sol.dirichlet_residual() < 1e-10)) fail(ErrorKind::SingularSystem, "capacitary trace residual above 1e-10");
  return sol;
}

inline PotentialSolution solve_capacitary(const AnnularDomain& domain) {
  return solve_capacitary(std::make_shared<const BieOperator>(domain));
}

inline BoundaryField normal_derivative_inner(const PotentialSolution& sol) { return sol.normal_derivative_inner(); }

inline std::vector<double> evaluate_potential(const PotentialSolution& sol, std::span<const Point> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(sol.value(p));
  return out;
}

/// The Robin operator p|inner -> dp/dnu + a p on the inner curve, for
/// harmonic p vanishing on the container.
class RobinOperator {
 public:
  RobinOperator(std::shared_ptr<const BieOperator> op, BoundaryField coeff)
      : op_(std::move(op)), coeff_(std::move(coeff)) {
    if (coeff_.size() != op_->n_inner()) fail(ErrorKind::GridMismatch, "Robin coefficient size mismatch");
    matrix_ = op_->dirichlet_to_neumann();
    matrix_.diagonal() += coeff_;
    lu_.compute(matrix_);
  }

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const BoundaryField& coefficient() const { return coeff_; }

  /// Smallest over largest singular value of the discrete operator.
  double margin() const {
    std::call_once(svd_once_, [this] {
      Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix_);
      const auto& s = svd.singularValues();
      margin_ = s[s.size() - 1] / s[0];
    });
    return margin_;
  }

  BoundaryField solve(const BoundaryField& rhs) const {
    if (rhs.size() != op_->n_inner()) fail(ErrorKind::GridMismatch, "Robin data size mismatch");
    if (margin() < bie_defaults::degenerate_margin)
      fail(ErrorKind::DegenerateOperator, "Robin operator smallest singular value below threshold");
    return lu_.solve(rhs);
  }

  BoundaryField apply(const BoundaryField& p) const { return matrix_ * p; }

 private:
  std::shared_ptr<const BieOperator> op_;
  BoundaryField coeff_;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  mutable std::once_flag svd_once_;
  mutable double margin_ = 0.0;
};

inline BoundaryField solve_robin(std::shared_ptr<const BieOperator> op, const BoundaryField& robin_coeff,
                                 const BoundaryField& rhs) {
  return RobinOperator(std::move(op), robin_coeff).solve(rhs);
}

inline BoundaryField solve_robin(const AnnularDomain& domain, const BoundaryField& robin_coeff,
                                 const BoundaryField& rhs) {
  return solve_robin(std::make_shared<const BieOperator>(domain), robin_coeff, rhs);
}

inline bool is_unit_disk(const BoundaryCurve& c, double tol = 1e-14) {
  if (c.center().norm() > tol || std::abs(c.coefficients().a0 - 1.0) > tol) return false;
  for (double v : c.coefficients().cos)
    if (std::abs(v) > tol) return false;
  for (double v : c.coefficients().sin)
    if (std::abs(v) > tol) return false;
  return true;
}

/// Dirichlet Green's function of the unit disk.
inline double disk_green(const Point& x, const Point& y) {
  const double ny = y.norm();
  const Point ystar = y / (ny * ny);
  return (std::log((x - ystar).norm() * ny) - std::log((x - y).norm())) / two_pi;
}

/// Probe points inside the annulus that respect the evaluation guard.
inline std::vector<Point> annulus_probes(const BieOperator& op, int angles = 16) {
  const auto& dom = op.domain();
  std::vector<Point> out;
  for (int k = 0; k < angles; ++k) {
    const double th = two_pi * (k + 0.5) / angles;
    const Point dir(std::cos(th), std::sin(th));
    const Point c = dom.inner.center();
    const double r_in = dom.inner.radius(th);
    // distance to the container along the ray, by bisection on containment
    double lo = r_in, hi = 4.0 * (dom.outer.equivalent_radius() + (c - dom.outer.center()).norm());
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (dom.outer.contains(c + mid * dir) ? lo : hi) = mid;
    }
    for (double frac : {0.3, 0.5, 0.7}) {
      const Point p = c + (r_in + frac * (lo - r_in)) * dir;
      if (op.in_annulus(p) && op.guard_distance(p) > bie_defaults::guard_spacings) out.push_back(p);
    }
  }
  return out;
}

/// Max over annulus probes of |u_BIE - int_{inner} Q G dsigma|. The identity
/// only holds at solutions; the number is returned without judgment.
inline double greens_check(const PotentialSolution& sol, const BoundaryField& q) {
  const auto& dom = sol.domain();
  if (!is_unit_disk(dom.outer)) fail(ErrorKind::OuterNotDisk, "Green's representation needs the unit disk container");
  const auto& si = dom.inner_samples;
  if (q.size() != si.n) fail(ErrorKind::GridMismatch, "Q field size mismatch");
  double worst = 0.0;
  for (const auto& p : annulus_probes(sol.op())) {
    double ug = 0.0;
    for (int j = 0; j < si.n; ++j)
      ug += q[j] * disk_green(p, Point(si.points(j, 0), si.points(j, 1))) * si.speed[j] * si.weight();
    worst = std::max(worst, std::abs(sol.value(p) - ug));
  }
  return worst;
}

inline double greens_check(const AnnularDomain& domain, const BoundaryField& q) {
  return greens_check(solve_capacitary(domain), q);
}

}  // namespace bernoulli
