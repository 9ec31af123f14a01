#pragma once

// Evolution of a solution family under a time-dependent Q: the normal
// velocity comes from the Robin response to dQ/dt, the radius coefficients
// advance by a linearly stabilized step, and Newton re-projects onto F = 0.

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bernoulli/bernoulli_operator.hpp"
#include "bernoulli/classification.hpp"
#include "bernoulli/conserved_moments.hpp"
#include "bernoulli/errors.hpp"

namespace bernoulli {

/// Case a flow run declares: (A) hyperbolic, monotone,
/// Q increasing; (B) elliptic, monotone, Q decreasing.
enum class FlowCase { None, A, B };

inline std::string_view to_string(FlowCase c) {
  switch (c) {
    case FlowCase::None: return "none";
    case FlowCase::A: return "A";
    case FlowCase::B: return "B";
  }
  return "?";
}

struct SymbolPreconditioner {
  double mu = 1.0;
  double m1 = 0.0;
  double m2 = 0.0;
  std::vector<double> table;  // multiplier for k = 0..K

  static double multiplier(int k, double mu) {
    const double a = std::abs(k);
    return (a * a + 1.0) / (a + mu);
  }
  double operator()(int k) const { return multiplier(k, mu); }
  /// Scale of the implicit term, -m1 m2, clamped at zero.
  double gain() const { return std::max(0.0, -m1 * m2); }
};

inline double default_mu(const SolutionState& state) {
  return std::max(0.0, -state.robin_coefficient().minCoeff()) + 1.0;
}

/// `p` is the Robin response whose mean enters m2.
inline SymbolPreconditioner symbol_preconditioner(const SolutionState& state, double mu, const BoundaryField& p) {
  const auto& s = state.inner_samples();
  if (!(mu > 0.0) || (state.robin_coefficient().array() + mu).minCoeff() <= 0.0)
    fail(ErrorKind::MuTooSmall, "H + dQ/dnu / Q + mu must be positive on the inner curve");
  SymbolPreconditioner sp;
  sp.mu = mu;
  sp.m1 = s.metric.cwiseQuotient(state.q.value).mean();
  sp.m2 = p.mean();
  const int K = std::max(state.inner().degree(), s.n / 2);
  sp.table.resize(K + 1);
  for (int k = 0; k <= K; ++k) sp.table[k] = SymbolPreconditioner::multiplier(k, mu);
  return sp;
}

inline SymbolPreconditioner symbol_preconditioner(const SolutionState& state, double mu) {
  BoundaryField p = BoundaryField::Zero(state.inner_samples().n);
  if (state.q.time_derivative.cwiseAbs().maxCoeff() > 0.0) p = robin_operator(state).solve(state.q.time_derivative);
  return symbol_preconditioner(state, mu, p);
}

struct FlowOptions {
  FlowCase declared = FlowCase::None;
  double dt0 = 0.01;
  double dt_min = 1e-5;
  double dt_max = 0.05;
  bool adaptive = true;
  /// Off only for studying the bare time discretization.
  bool reproject = true;
  double drift_tol = 1e-5;
  int k_max = 8;
  int grow_after = 5;
  double parabolic_margin = 1e-5;
  /// Non-positive selects the default shift.
  double mu = 0.0;
  NewtonOptions newton{};
};

struct StepReport {
  SolutionState state;
  double predictor_residual = 0.0;
  BoundaryField velocity;  // radial rate at the start of the step
};

/// One step of size dt from a converged state.
inline StepReport flow_step(const SolutionState& state, double dt, const FlowOptions& opts = {}) {
  const auto& s = state.inner_samples();
  const BoundaryField& dq = state.q.time_derivative;
  BoundaryField p = BoundaryField::Zero(s.n);
  if (dq.cwiseAbs().maxCoeff() > 0.0) p = robin_operator(state).solve(dq);
  if (opts.declared != FlowCase::None && !(p.maxCoeff() < 0.0))
    fail(ErrorKind::SignMismatch, std::string("case ") + std::string(to_string(opts.declared)) +
                                      " needs a negative Robin response to dQ/dt on the whole curve");

  // same map as inverse_linearization, reusing p for the sign check
  const BoundaryField rdot = p.cwiseQuotient(state.q.value.cwiseProduct(s.metric));
  const int K = state.inner().degree();
  FourierCoefficients dc = fourier_coefficients(rdot, K);
  const SymbolPreconditioner sp = symbol_preconditioner(state, opts.mu > 0.0 ? opts.mu : default_mu(state), p);
  const double gamma = sp.gain();
  dc.a0 *= dt / (1.0 + dt * gamma * sp(0));
  for (int k = 1; k <= K; ++k) {
    const double f = dt / (1.0 + dt * gamma * sp(k));
    dc.cos[k - 1] *= f;
    dc.sin[k - 1] *= f;
  }

  const double t1 = state.t() + dt;
  SolutionState pred = eval_F(state.domain().with_inner(state.inner().perturbed(dc)), state.schedule, t1);
  const double pred_res = pred.residual_norm;
  if (opts.reproject) pred = newton_correct(std::move(pred), opts.newton);
  else pred.converged = false;
  return {std::move(pred), pred_res, rdot};
}

enum class Termination { Completed, ParabolicApproach, Failed };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::ParabolicApproach: return "ParabolicApproach";
    case Termination::Failed: return "Failed";
  }
  return "?";
}

struct StepDiagnostics {
  double t = 0.0;
  double dt = 0.0;
  double residual_step = 0.0;  // before re-projection
  double residual = 0.0;       // stored state
  double drift = std::numeric_limits<double>::quiet_NaN();
  double margin = 0.0;
  SolutionKind kind = SolutionKind::Parabolic;
  int newton_iterations = 0;
  std::vector<double> moments;
};

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<SolutionState> states;
  std::vector<StepDiagnostics> diagnostics;  // one per stored state, the first for t0
  Termination termination = Termination::Completed;
  std::optional<ErrorKind> error_kind;
  std::string error_message;
  int rejected_steps = 0;

  double max_drift() const {
    double d = 0.0;
    for (const auto& x : diagnostics)
      if (!std::isnan(x.drift)) d = std::max(d, x.drift);
    return d;
  }
};

namespace detail {
inline bool moments_available(const SolutionState& s) {
  return is_unit_disk(s.domain().outer) && s.inner().contains(Point::Zero());
}

inline void check_case(const ClassificationRecord& rec, FlowCase c) {
  if (c == FlowCase::A && !(rec.kind == SolutionKind::Hyperbolic && rec.monotone))
    fail(ErrorKind::SignMismatch, "case A needs a hyperbolic monotone initial state");
  if (c == FlowCase::B && !(rec.kind == SolutionKind::Elliptic && rec.monotone))
    fail(ErrorKind::SignMismatch, "case B needs an elliptic monotone initial state");
}
}  // namespace detail

/// Integrates from state0 to t0 + T. Errors after the initial checks end the
/// run and are recorded in the trajectory rather than thrown.
inline FlowTrajectory run_flow(SolutionState state0, double T, const FlowOptions& opts = {}) {
  if (!state0.converged && state0.residual_norm >= opts.newton.tol)
    fail(ErrorKind::NoConvergence, "the initial state is not converged");
  if (!(T >= 0.0)) fail(ErrorKind::OutOfRange, "horizon must be non-negative");
  state0.converged = true;
  FlowTrajectory traj;
  const auto basis = harmonic_test_basis(opts.k_max);
  const bool with_moments = detail::moments_available(state0);
  std::optional<MomentVector> m0;
  if (with_moments) m0 = moments(state0, basis);

  auto record = [&](SolutionState st, double dt, double pred_res) {
    const ClassificationRecord rec = classify(st);
    StepDiagnostics d;
    d.t = st.t();
    d.dt = dt;
    d.residual_step = pred_res;
    d.residual = st.residual_norm;
    d.margin = rec.nondegeneracy_margin;
    d.kind = rec.kind;
    d.newton_iterations = st.iterations;
    if (m0 && detail::moments_available(st)) {
      const MomentVector m = moments(st, basis);
      d.drift = m.max_drift(*m0);
      d.moments = m.values;
    }
    traj.times.push_back(st.t());
    traj.states.push_back(std::move(st));
    traj.diagnostics.push_back(std::move(d));
    return rec;
  };

  const ClassificationRecord rec0 = record(std::move(state0), 0.0, 0.0);
  detail::check_case(rec0, opts.declared);
  const double t0 = traj.times.front();
  const double t_end = t0 + T;
  if (rec0.nondegeneracy_margin < opts.parabolic_margin) {
    traj.termination = Termination::ParabolicApproach;
    return traj;
  }

  double dt = std::clamp(opts.dt0, opts.dt_min, opts.dt_max);
  int clean = 0;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  while (traj.times.back() < t_end - eps) {
    const SolutionState& cur = traj.states.back();
    const double step = std::min(dt, t_end - cur.t());
    std::optional<StepReport> rep;
    try {
      rep = flow_step(cur, step, opts);
      if (opts.adaptive && m0 && detail::moments_available(rep->state) &&
          moments(rep->state, basis).max_drift(*m0) > opts.drift_tol) {
        rep.reset();
      }
    } catch (const Error& e) {
      const bool retryable = e.kind() == ErrorKind::NoConvergence || detail::is_geometry_error(e);
      if (!opts.adaptive || !retryable) {
        traj.termination = Termination::Failed;
        traj.error_kind = e.kind();
        traj.error_message = e.what();
        return traj;
      }
    }
    if (!rep) {
      ++traj.rejected_steps;
      clean = 0;
      dt *= 0.5;
      if (dt < opts.dt_min) {
        traj.termination = Termination::Failed;
        traj.error_kind = ErrorKind::StepSizeUnderflow;
        traj.error_message = "step size fell below " + std::to_string(opts.dt_min);
        return traj;
      }
      continue;
    }
    const ClassificationRecord rec = record(std::move(rep->state), step, rep->predictor_residual);
    if (rec.nondegeneracy_margin < opts.parabolic_margin) {
      traj.termination = Termination::ParabolicApproach;
      return traj;
    }
    if (opts.adaptive && ++clean >= opts.grow_after) {
      dt = std::min(dt * 1.25, opts.dt_max);
      clean = 0;
    }
  }
  return traj;
}

struct BranchRow {
  double Q = 0.0;
  int seed = 0;
  bool converged = false;
  std::optional<ErrorKind> error;
  std::string message;
  double area = 0.0;
  double equivalent_radius = 0.0;
  SolutionKind kind = SolutionKind::Parabolic;
  double margin = 0.0;
  bool parabolic_flag = false;
  double integral_p = 0.0;
  std::optional<SolutionState> state;

  std::string kind_label() const { return converged ? std::string(to_string(kind)) : "NoConvergence"; }
};

/// Newton solutions for every (Q, seed) pair, rows ordered by Q then seed.
/// `schedule_for` builds the schedule at a given Q level; rows run
/// concurrently and any solver failure is recorded as NoConvergence.
inline std::vector<BranchRow> branch_sweep(const BoundaryCurve& outer,
                                           const std::function<QSchedule(double)>& schedule_for,
                                           const std::vector<double>& q_values,
                                           const std::vector<BoundaryCurve>& seeds, int n, double t = 0.0,
                                           const NewtonOptions& newton = {}) {
  auto solve_row = [&](double qv, int si) {
    BranchRow row;
    row.Q = qv;
    row.seed = si;
    try {
      SolutionState st = eval_F(AnnularDomain(outer, seeds[si], n), schedule_for(qv), t);
      st = newton_correct(std::move(st), newton);
      const ClassificationRecord rec = classify(st);
      row.converged = true;
      row.area = st.inner().area();
      row.equivalent_radius = st.inner().equivalent_radius();
      row.kind = rec.kind;
      row.margin = rec.nondegeneracy_margin;
      row.parabolic_flag = rec.parabolic_flag;
      row.integral_p = rec.integral_p;
      row.state = std::move(st);
    } catch (const Error& e) {
      row.error = e.kind();
      row.message = e.what();
    }
    return row;
  };
  std::vector<std::future<BranchRow>> jobs;
  for (double qv : q_values)
    for (int si = 0; si < static_cast<int>(seeds.size()); ++si)
      jobs.push_back(std::async(std::launch::async, solve_row, qv, si));
  std::vector<BranchRow> rows;
  rows.reserve(jobs.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

inline std::vector<BranchRow> branch_sweep(const BoundaryCurve& outer, const std::vector<double>& q_values,
                                           const std::vector<BoundaryCurve>& seeds, int n,
                                           const NewtonOptions& newton = {}) {
  return branch_sweep(
      outer, [](double q) { return QSchedule::constant(q); }, q_values, seeds, n, 0.0, newton);
}

}  // namespace bernoulli
