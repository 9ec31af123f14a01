#pragma once

// The free-boundary residual F = du/dnu - Q on the inner curve, its
// linearization with respect to the polar radius, and a quasi-Newton
// corrector that inverts the linearization through the Robin problem.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bernoulli/classification_record.hpp"
#include "bernoulli/curve_geometry.hpp"
#include "bernoulli/errors.hpp"
#include "bernoulli/laplace_bie.hpp"
#include "bernoulli/q_schedule.hpp"

namespace bernoulli {

struct SolutionState {
  std::shared_ptr<const BieOperator> op;
  std::shared_ptr<const QSchedule> schedule;
  PotentialSolution potential;
  QSnapshot q;
  BoundaryField normal_derivative;  // du/dnu on the inner nodes
  BoundaryField residual;
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Residual norms of the Newton iterates, starting with the initial one.
  std::vector<double> history;
  std::vector<std::string> warnings;
  std::optional<double> margin;
  std::optional<ClassificationRecord> classification;

  const AnnularDomain& domain() const { return op->domain(); }
  const BoundaryCurve& inner() const { return domain().inner; }
  const CurveSamples& inner_samples() const { return domain().inner_samples; }
  double t() const { return q.t; }
  /// Robin coefficient H + dQ/dnu / Q.
  BoundaryField robin_coefficient() const {
    return inner_samples().curvature + q.normal_derivative.cwiseQuotient(q.value);
  }
};

inline SolutionState eval_F(const AnnularDomain& domain, std::shared_ptr<const QSchedule> schedule, double t) {
  auto op = std::make_shared<const BieOperator>(domain);
  PotentialSolution pot = solve_capacitary(op);
  QSnapshot q = snapshot(*schedule, op->domain().inner_samples, t);
  if (!(q.value.minCoeff() > 0.0)) fail(ErrorKind::ConfigInvalid, "Q must be positive on the inner curve");
  BoundaryField un = pot.normal_derivative_inner();
  BoundaryField res = un - q.value;
  const double norm = res.lpNorm<Eigen::Infinity>();
  return SolutionState{std::move(op), std::move(schedule), std::move(pot), std::move(q), std::move(un),
                       std::move(res), norm};
}

inline SolutionState eval_F(const AnnularDomain& domain, const QSchedule& schedule, double t) {
  return eval_F(domain, std::make_shared<const QSchedule>(schedule), t);
}

inline RobinOperator robin_operator(const SolutionState& state) {
  return RobinOperator(state.op, state.robin_coefficient());
}

/// Derivative of F (sampled at fixed node angles) along the radial rate
/// field `rho_dot` = dR at the nodes. The tangential part accounts for the
/// nodes sliding along the curve when R changes; it vanishes at solutions.
inline BoundaryField apply_linearization(const SolutionState& state, const BoundaryField& rho_dot) {
  const auto& s = state.inner_samples();
  if (rho_dot.size() != s.n) fail(ErrorKind::GridMismatch, "perturbation size mismatch");
  // inward normal displacement is -g dR
  const BoundaryField normal_in = -s.metric.cwiseProduct(rho_dot);
  const BoundaryField p = -state.normal_derivative.cwiseProduct(normal_in);
  const BoundaryField dpdnu = state.op->dirichlet_to_neumann() * p;
  BoundaryField out = s.curvature.cwiseProduct(p) + dpdnu - state.q.normal_derivative.cwiseProduct(normal_in);
  const BoundaryField dres = spectral::derivative(state.residual);
  for (int i = 0; i < s.n; ++i) {
    const double tangential = rho_dot[i] * s.dradius[i] / s.speed[i];
    out[i] += dres[i] / s.speed[i] * tangential;
  }
  return out;
}

/// The inverse formula at solutions: dR = p / (Q g), p solving the Robin
/// problem with data phi. The sign differs from the normal-graph form
/// because R grows along the outward normal.
inline BoundaryField inverse_linearization(const SolutionState& state, const BoundaryField& phi) {
  const BoundaryField p = robin_operator(state).solve(phi);
  return p.cwiseQuotient(state.q.value.cwiseProduct(state.inner_samples().metric));
}

struct NewtonOptions {
  double tol = 1e-9;
  int max_iter = 25;
  int max_halvings = 8;
  /// Margins below this attach a DegeneracyWarning to the converged state.
  double warning_margin = 1e-5;
};

namespace detail {
inline bool is_geometry_error(const Error& e) {
  return e.kind() == ErrorKind::NonStarShaped || e.kind() == ErrorKind::BoundaryTooClose ||
         e.kind() == ErrorKind::ResolutionTooLow;
}
}  // namespace detail

/// Corrects a candidate toward F = 0 with the simplified (Robin) inverse and
/// step halving. Updates are projected onto the inner curve's Fourier degree.
inline SolutionState newton_correct(SolutionState state, const NewtonOptions& opts = {}) {
  state.history.assign(1, state.residual_norm);
  state.iterations = 0;
  if (state.residual_norm < opts.tol) {
    state.converged = true;
    return state;
  }
  const int degree = state.inner().degree();
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const BoundaryField step_field = -inverse_linearization(state, state.residual);
    const FourierCoefficients step = fourier_coefficients(step_field, degree);
    std::optional<SolutionState> accepted;
    std::optional<Error> geometry;
    double scale = 1.0;
    for (int h = 0; h <= opts.max_halvings; ++h, scale *= 0.5) {
      try {
        SolutionState trial =
            eval_F(state.domain().with_inner(state.inner().perturbed(step, scale)), state.schedule, state.t());
        if (trial.residual_norm < state.residual_norm) {
          accepted = std::move(trial);
          break;
        }
      } catch (const Error& e) {
        if (!detail::is_geometry_error(e)) throw;
        geometry = e;
      }
    }
    if (!accepted) {
      if (geometry) throw *geometry;
      fail(ErrorKind::NoConvergence, "step halving exhausted at iteration " + std::to_string(iter));
    }
    accepted->history = std::move(state.history);
    accepted->history.push_back(accepted->residual_norm);
    accepted->iterations = iter;
    state = std::move(*accepted);
    if (state.residual_norm < opts.tol) {
      state.converged = true;
      const double m = robin_operator(state).margin();
      state.margin = m;
      if (m < opts.warning_margin)
        state.warnings.push_back("DegeneracyWarning: nondegeneracy margin " + std::to_string(m));
      return state;
    }
  }
  fail(ErrorKind::NoConvergence, "residual " + std::to_string(state.residual_norm) + " above tolerance after " +
                                     std::to_string(opts.max_iter) + " iterations");
}

/// Circle of radius r about `center`, carrying Fourier degree N/8 so that the
/// corrector can move every resolved mode.
inline BoundaryCurve seed_circle(const Point& center, double r, int n) {
  return BoundaryCurve::circle(center, r, std::max(1, n / 8));
}

}  // namespace bernoulli
