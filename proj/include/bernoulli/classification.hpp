#pragma once

// Type of a converged solution from the Robin response to unit data.

#include <cmath>
#include <utility>

#include <Eigen/SVD>

#include "bernoulli/bernoulli_operator.hpp"
#include "bernoulli/classification_record.hpp"

namespace bernoulli {

namespace classification_defaults {
inline constexpr double parabolic_margin = 1e-5;
inline constexpr double degenerate_margin = 1e-10;
inline constexpr double tau_scale = 1e-6;
inline constexpr double monotone_scale = 1e-8;
}  // namespace classification_defaults

/// Normalized smallest singular value of the discrete Robin operator.
inline double nondegeneracy_margin(const SolutionState& state) {
  if (state.margin) return *state.margin;
  return robin_operator(state).margin();
}

/// The field H + Q + dQ/dnu / Q and whether it is positive everywhere.
inline std::pair<bool, BoundaryField> acker_criterion(const SolutionState& state) {
  BoundaryField f = state.robin_coefficient() + state.q.value;
  const bool ok = f.minCoeff() > 0.0;
  return {ok, std::move(f)};
}

/// Classifies `state` and attaches the record. A negative `tau_par` selects
/// the default 1e-6 times the length of the inner curve.
inline ClassificationRecord classify(SolutionState& state, double tau_par = -1.0) {
  namespace cd = classification_defaults;
  const auto& s = state.inner_samples();
  if (tau_par < 0.0) tau_par = cd::tau_scale * s.length();

  const RobinOperator robin = robin_operator(state);
  ClassificationRecord rec;
  rec.nondegeneracy_margin = robin.margin();
  state.margin = rec.nondegeneracy_margin;
  rec.degenerate = rec.nondegeneracy_margin < cd::degenerate_margin;
  rec.parabolic_flag = rec.nondegeneracy_margin < cd::parabolic_margin;

  const BoundaryField ones = BoundaryField::Ones(s.n);
  if (rec.degenerate) {
    // least-squares response; only reported, never trusted
    Eigen::BDCSVD<Eigen::MatrixXd> svd(robin.matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    rec.p_trace = svd.solve(ones);
  } else {
    rec.p_trace = robin.solve(ones);
  }
  rec.integral_p = integrate_boundary(s, rec.p_trace);

  if (rec.parabolic_flag || std::abs(rec.integral_p) <= tau_par)
    rec.kind = SolutionKind::Parabolic;
  else
    rec.kind = rec.integral_p > 0.0 ? SolutionKind::Elliptic : SolutionKind::Hyperbolic;

  const double cut = cd::monotone_scale * rec.p_trace.cwiseAbs().maxCoeff();
  rec.monotone = rec.p_trace.minCoeff() > cut || rec.p_trace.maxCoeff() < -cut;
  rec.criterion_ok = acker_criterion(state).first;
  state.classification = rec;
  return rec;
}

inline ClassificationRecord classify(const SolutionState& state, double tau_par = -1.0) {
  SolutionState copy = state;
  return classify(copy, tau_par);
}

}  // namespace bernoulli
