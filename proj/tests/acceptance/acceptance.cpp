// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bernoulli/classification.hpp"
#include "bernoulli/cli_runner.hpp"
#include "bernoulli/conserved_moments.hpp"
#include "bernoulli/foliation_flow.hpp"
#include "bernoulli/radial_oracle.hpp"
#include "common.hpp"
#include "oracles.hpp"

using namespace bernoulli;
using namespace fixtures;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

using Clock = std::chrono::steady_clock;

Outcome radial_dirichlet() {
  Outcome o;
  const auto t0 = Clock::now();
  const AnnularDomain dom(unit_disk(), BoundaryCurve::circle(Point::Zero(), 0.5), 128);
  const BoundaryField un = solve_capacitary(dom).normal_derivative_inner();
  const double secs = seconds_since(t0);
  const double err = (un.array() - oracle::q_of_0p5).abs().maxCoeff();
  o.require(err < 1e-8, "max |du/dnu - 2.885390| = " + num(err) + " < 1e-8");
  o.require(secs < 1.0, "runtime " + num(secs) + " s < 1 s");
  return o;
}

Outcome critical_constants() {
  Outcome o;
  const auto [r2, q2] = radial::critical(2);
  const auto [r3, q3] = radial::critical(3);
  const double e2 = std::max(std::abs(r2 - oracle::inv_e), std::abs(q2 - oracle::e));
  const double e3 = std::max(std::abs(r3 - 0.5), std::abs(q3 - 4.0));
  o.require(e2 < 1e-12, "critical(2) error " + num(e2));
  o.require(e3 < 1e-12, "critical(3) error " + num(e3));
  return o;
}

Outcome two_branches() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<BoundaryCurve> seeds{seed_circle(Point::Zero(), 0.15, 128), seed_circle(Point::Zero(), 0.6, 128)};
  const auto rows = branch_sweep(unit_disk(), {3.0, 2.0}, seeds, 128);
  const double secs = seconds_since(t0);
  const double r_expect[2] = {oracle::r1_3, oracle::r2_3};
  const SolutionKind k_expect[2] = {SolutionKind::Hyperbolic, SolutionKind::Elliptic};
  for (int s = 0; s < 2; ++s) {
    const auto& r = rows[s];
    const double err = r.converged ? std::abs(r.equivalent_radius - r_expect[s]) : INFINITY;
    o.require(r.converged && err < 1e-6 && r.kind == k_expect[s],
              "Q=3 seed " + std::to_string(s) + ": " + r.kind_label() + ", radius error " + num(err));
  }
  for (int s = 2; s < 4; ++s)
    o.require(rows[s].kind_label() == "NoConvergence", "Q=2 seed " + std::to_string(s - 2) + ": " + rows[s].kind_label());
  o.require(secs < 30.0, "runtime " + num(secs) + " s < 30 s");
  return o;
}

Outcome classification_closed_form() {
  Outcome o;
  const double r_vals[2] = {0.5, 0.2};
  const double expect[2] = {oracle::robin_int_0p5, oracle::robin_int_0p2};
  for (int i = 0; i < 2; ++i) {
    SolutionState st = solved(r_vals[i] - 0.01, QSchedule::constant(radial::radial_Q(r_vals[i])));
    const auto rec = classify(st);
    const double err = std::abs(rec.integral_p - expect[i]);
    o.require(err < 1e-6 && rec.monotone && !rec.parabolic_flag && !rec.degenerate,
              "r=" + num(r_vals[i]) + ": integral_p " + num(rec.integral_p) + " error " + num(err) +
                  (rec.monotone ? ", monotone" : ", not monotone") + ", margin " + num(rec.nondegeneracy_margin));
  }
  // the flag near the fold, and the kind switch across it
  for (double dr : {-1e-4, 0.0, 1e-4}) {
    const double r = oracle::inv_e + dr;
    const auto rec = classify(radial_state(r));
    o.require(rec.parabolic_flag || rec.degenerate,
              "r*" + std::string(dr < 0 ? "-1e-4" : dr > 0 ? "+1e-4" : "") + ": margin " + num(rec.nondegeneracy_margin) +
                  (rec.parabolic_flag ? " flagged" : " not flagged"));
  }
  const auto below = classify(radial_state(oracle::inv_e - 5e-4));
  const auto above = classify(radial_state(oracle::inv_e + 5e-4));
  o.require(below.kind == SolutionKind::Hyperbolic && above.kind == SolutionKind::Elliptic,
            "kinds at r* -/+ 5e-4: " + std::string(to_string(below.kind)) + "/" + std::string(to_string(above.kind)));
  return o;
}

Outcome flow_hyperbolic() {
  Outcome o;
  const auto t0 = Clock::now();
  FlowOptions opts;
  opts.declared = FlowCase::A;
  opts.dt0 = 0.01;
  const auto tr = run_flow(solved(oracle::r1_3, QSchedule::affine(3.0, 1.0)), 0.5, opts);
  const double secs = seconds_since(t0);
  o.require(tr.termination == Termination::Completed, "termination " + std::string(to_string(tr.termination)));
  const double err = std::abs(tr.states.back().inner().equivalent_radius() - oracle::r1_3p5);
  o.require(err < 1e-4, "terminal radius error " + num(err));
  bool all_h = true;
  double max_res = 0.0;
  for (const auto& d : tr.diagnostics) {
    all_h = all_h && d.kind == SolutionKind::Hyperbolic;
    max_res = std::max(max_res, d.residual);
  }
  o.require(all_h, std::to_string(tr.states.size()) + " states all Hyperbolic");
  o.require(max_res < 1e-8, "max residual " + num(max_res));
  o.require(tr.max_drift() < 1e-5, "max drift " + num(tr.max_drift()));
  o.require(secs < 120.0, "runtime " + num(secs) + " s");
  return o;
}

Outcome flow_elliptic() {
  Outcome o;
  FlowOptions opts;
  opts.declared = FlowCase::B;
  const auto tr = run_flow(solved(oracle::r2_3, QSchedule::affine(3.0, -1.0)), 0.2, opts);
  o.require(tr.termination == Termination::Completed, "termination " + std::string(to_string(tr.termination)));
  const double err = std::abs(tr.states.back().inner().equivalent_radius() - oracle::r2_2p8);
  o.require(err < 1e-4, "terminal radius error " + num(err));
  bool decreasing = true;
  for (std::size_t i = 1; i < tr.states.size(); ++i)
    decreasing = decreasing && tr.states[i].inner().equivalent_radius() < tr.states[i - 1].inner().equivalent_radius();
  o.require(decreasing, "radius decreases over " + std::to_string(tr.states.size()) + " states");
  return o;
}

Outcome one_sidedness() {
  Outcome o;
  FlowOptions opts;
  opts.declared = FlowCase::A;
  const auto tr = run_flow(solved(oracle::r1_3, QSchedule::affine(3.0, -1.0)), 0.5, opts);
  o.require(tr.error_kind && *tr.error_kind == ErrorKind::SignMismatch,
            std::string("run_flow error ") + (tr.error_kind ? std::string(to_string(*tr.error_kind)) : "none"));
  o.require(tr.states.size() == 1, "accepted steps " + std::to_string(tr.states.size() - 1));
  const bernoulli::json cfg = {{"mode", "flow"},
                               {"initial", {{"radius", 0.22}}},
                               {"schedule", {{"type", "affine"}, {"q0", 3.0}, {"q1", -1.0}}},
                               {"flow", {{"T", 0.5}, {"case", "A"}}}};
  std::string kind = "none";
  try {
    cli::parse_config(cfg);
  } catch (const Error& e) {
    kind = std::string(to_string(e.kind()));
  }
  o.require(kind == "ConfigInvalid", "config check " + kind);
  return o;
}

Outcome moment_certificates() {
  Outcome o;
  const auto basis = harmonic_test_basis(8);
  std::vector<SolutionState> states;
  for (double r : {0.22, 0.3, 0.5, 0.54}) states.push_back(solved(r, QSchedule::constant(radial::radial_Q(r))));
  for (double r : {0.22, 0.54}) states.push_back(solved(r, QSchedule::linear(3.0, 0.0, Point(0.02, 0.0))));
  states.push_back(solved(0.22, QSchedule::linear(3.0, 0.0, Point(0.0, 0.02))));
  double worst = 0.0;
  for (const auto& st : states) {
    const auto m = moments(st, basis);
    for (std::size_t i = 0; i < basis.size(); ++i)
      worst = std::max(worst, std::abs(m.values[i] - (basis[i].k == 0 ? -oracle::two_pi : 0.0)));
  }
  o.require(worst < 1e-6, std::to_string(states.size()) + " solutions, max moment error " + num(worst));

  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 1e-3);
  double weakest = INFINITY;
  for (const auto& st : states) {
    FourierCoefficients d = st.inner().coefficients();
    d.a0 = noise(rng);
    for (auto& c : d.cos) c = noise(rng);
    for (auto& c : d.sin) c = noise(rng);
    const SolutionState bad = eval_F(st.domain().with_inner(st.inner().perturbed(d)), st.schedule, st.t());
    const auto m = moments(bad, basis);
    double v = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      v = std::max(v, std::abs(m.values[i] - (basis[i].k == 0 ? -oracle::two_pi : 0.0)));
    weakest = std::min(weakest, v);
  }
  o.require(weakest > 1e-4, "smallest violation on corrupted states " + num(weakest));
  return o;
}

Outcome linearization() {
  Outcome o;
  std::mt19937 rng(2025);
  const auto q = QSchedule::linear(3.0, 0.0, Point(0.02, 0.0));
  const SolutionState st = solved(0.5, q);
  double min_order = INFINITY;
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = random_direction(rng, 8);
    const BoundaryField lin = apply_linearization(st, direction_field(st.inner_samples(), d));
    double err[2];
    int j = 0;
    for (double h : {1e-4, 5e-5}) {
      const auto fp = eval_F(st.domain().with_inner(st.inner().perturbed(d, h)), q, 0.0).residual;
      const auto fm = eval_F(st.domain().with_inner(st.inner().perturbed(d, -h)), q, 0.0).residual;
      err[j++] = (lin - (fp - fm) / (2 * h)).lpNorm<Eigen::Infinity>();
    }
    min_order = std::min(min_order, std::log2(err[0] / err[1]));
  }
  o.require(min_order >= 1.9, "smallest observed order over 5 directions " + num(min_order));

  double worst = 0.0;
  for (const auto& s : {st, solved(oracle::r1_3, QSchedule::constant(3.0)), solved(0.22, q)}) {
    for (int trial = 0; trial < 3; ++trial) {
      const BoundaryField phi = smooth_field(s.inner_samples(), rng, 8);
      const BoundaryField back = apply_linearization(s, inverse_linearization(s, phi));
      worst = std::max(worst, (back - phi).lpNorm<Eigen::Infinity>() / std::max(1.0, phi.lpNorm<Eigen::Infinity>()));
    }
  }
  o.require(worst < 1e-6, "inverse roundtrip error " + num(worst));
  return o;
}

Outcome non_radial() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto q = QSchedule::linear(3.0, 1.0, Point(0.02, 0.0));
  FlowOptions opts;
  opts.declared = FlowCase::A;
  const auto tr = run_flow(solved(0.22, q), 0.3, opts);
  const double secs = seconds_since(t0);
  o.require(tr.termination == Termination::Completed, "termination " + std::string(to_string(tr.termination)));
  o.require(std::abs(tr.times.back() - 0.3) < 1e-12, "reached t = " + num(tr.times.back()));
  const auto basis = harmonic_test_basis(8);
  double max_res = 0.0, max_quad = 0.0;
  bool all_h = true;
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    max_res = std::max(max_res, tr.diagnostics[i].residual);
    all_h = all_h && tr.diagnostics[i].kind == SolutionKind::Hyperbolic;
    max_quad = std::max(max_quad, max_quadrature_residual(tr.states[i], basis));
  }
  const auto& c = tr.states.back().inner().coefficients();
  o.require(max_res < 1e-8, "max residual " + num(max_res));
  o.require(all_h, std::to_string(tr.states.size()) + " states all Hyperbolic");
  o.require(max_quad < 1e-6, "max quadrature residual " + num(max_quad));
  o.require(std::abs(c.cos[0]) > 1e-6, "terminal first cosine mode " + num(c.cos[0]));
  o.require(secs < 300.0, "runtime " + num(secs) + " s");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"radial Dirichlet accuracy", radial_dirichlet},
      {"critical constants", critical_constants},
      {"two-branch reproduction", two_branches},
      {"classification closed-form match", classification_closed_form},
      {"hyperbolic foliation flow", flow_hyperbolic},
      {"elliptic foliation flow", flow_elliptic},
      {"one-sidedness", one_sidedness},
      {"moment certificates", moment_certificates},
      {"linearization correctness", linearization},
      {"non-radial regression", non_radial},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failed;
    std::printf("[%s] %zu: %s (%s)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
