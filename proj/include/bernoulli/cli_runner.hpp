#pragma once

// Batch runs driven by a JSON configuration. Each run fills one directory
// with config-echo.json, states/NNNN.json, diagnostics.csv, summary.json and
// timing.json; emit_plot_data turns a finished directory into plot tables.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bernoulli/bernoulli_operator.hpp"
#include "bernoulli/classification.hpp"
#include "bernoulli/conserved_moments.hpp"
#include "bernoulli/errors.hpp"
#include "bernoulli/foliation_flow.hpp"
#include "bernoulli/q_schedule.hpp"
#include "bernoulli/radial_oracle.hpp"
#include "bernoulli/serialization.hpp"

namespace bernoulli::cli {

namespace fs = std::filesystem;

enum class Mode { Solve, Classify, Branch, Flow, Oracle, Moments };

inline const std::vector<std::pair<std::string, Mode>>& mode_names() {
  static const std::vector<std::pair<std::string, Mode>> names = {
      {"solve", Mode::Solve}, {"classify", Mode::Classify}, {"branch", Mode::Branch},
      {"flow", Mode::Flow},   {"oracle", Mode::Oracle},     {"moments", Mode::Moments}};
  return names;
}

inline std::optional<Mode> parse_mode(const std::string& s) {
  for (const auto& [name, m] : mode_names())
    if (name == s) return m;
  return std::nullopt;
}

inline std::string mode_name(Mode m) {
  for (const auto& [name, v] : mode_names())
    if (v == m) return name;
  return "?";
}

enum ExitCode { Ok = 0, ConfigError = 2, SolverError = 3, IoFailure = 4 };

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigInvalid: return ConfigError;
    case ErrorKind::IoError:
    case ErrorKind::MissingArtifacts: return IoFailure;
    default: return SolverError;
  }
}

/// Schedule description: {"type": constant|affine|linear|table, ...}.
struct ScheduleSpec {
  json raw;

  QSchedule build(std::optional<double> level = std::nullopt) const {
    try {
      const std::string type = raw.value("type", "constant");
      double q0 = type == "constant" ? raw.at("q").get<double>() : raw.at("q0").get<double>();
      double q1 = type == "constant" ? 0.0 : raw.value("q1", 0.0);
      if (level) {
        q0 = *level;
        q1 = 0.0;
      }
      if (type == "constant" || type == "affine") return QSchedule::affine(q0, q1);
      if (type == "linear") return QSchedule::linear(q0, q1, point_from_json(raw.at("gradient")));
      if (type == "table") {
        const auto xs = raw.at("xs").get<std::vector<double>>();
        const auto ys = raw.at("ys").get<std::vector<double>>();
        const auto rows = raw.at("values").get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd v(static_cast<long>(rows.size()), rows.empty() ? 0L : static_cast<long>(rows[0].size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (static_cast<long>(rows[i].size()) != v.cols()) fail(ErrorKind::ConfigInvalid, "ragged Q table");
          for (std::size_t j = 0; j < rows[i].size(); ++j) v(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
        }
        return QSchedule::table(q0, q1, xs, ys, v);
      }
      fail(ErrorKind::ConfigInvalid, "unknown schedule type '" + type + "'");
    } catch (const json::exception& e) {
      fail(ErrorKind::ConfigInvalid, std::string("bad schedule: ") + e.what());
    }
  }
};

struct RunConfig {
  Mode mode = Mode::Solve;
  json raw;
  std::optional<BoundaryCurve> container;
  std::optional<json> initial;
  std::optional<ScheduleSpec> schedule;
  int n = 128;
  double t0 = 0.0;
  NewtonOptions newton;
  FlowOptions flow;
  double horizon = 0.0;
  int k_max = 8;
  double tau_par = -1.0;
  std::vector<double> q_values;
  std::vector<json> seeds;
  int oracle_dim = 2;
  std::string out_dir;

  BoundaryCurve initial_curve() const { return curve_from_json(*initial, std::max(1, n / 8)); }

  json resolved() const {
    json j = {{"mode", mode_name(mode)}, {"N", n},           {"t0", t0},
              {"newton_tol", newton.tol}, {"max_iter", newton.max_iter}, {"k_max", k_max},
              {"tau_par", tau_par}};
    if (mode == Mode::Flow)
      j["flow"] = {{"T", horizon},
                   {"case", std::string(to_string(flow.declared))},
                   {"dt0", flow.dt0},
                   {"dt_min", flow.dt_min},
                   {"dt_max", flow.dt_max}};
    return j;
  }
};

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  try {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigInvalid, std::string("field '") + key + "': " + e.what());
  }
}

inline void require(const json& j, const char* key, Mode m) {
  if (!j.contains(key))
    fail(ErrorKind::ConfigInvalid, "mode '" + mode_name(m) + "' requires the field '" + key + "'");
}

/// Q > 0 on a grid over the container (and over the time window).
inline void probe_positivity(const QSchedule& q, const BoundaryCurve& container, double t0, double t1) {
  const double ext = container.equivalent_radius() * 2.0 + container.coefficients().a0;
  const Point c = container.center();
  const int m = 41, nt = t1 > t0 ? 11 : 1;
  for (int it = 0; it < nt; ++it) {
    const double t = nt == 1 ? t0 : t0 + (t1 - t0) * it / (nt - 1);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Point x = c + Point(-ext + 2 * ext * i / (m - 1), -ext + 2 * ext * j / (m - 1));
        if (!container.contains(x)) continue;
        const double v = q.value(x, t);
        if (!(v > 0.0))
          fail(ErrorKind::ConfigInvalid, "Q is not positive at (" + fmt_double(x.x()) + ", " + fmt_double(x.y()) +
                                             ") at t = " + fmt_double(t));
      }
  }
}

inline void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) fail(ErrorKind::IoError, "cannot open " + tmp.string());
    f << text;
    if (!f) fail(ErrorKind::IoError, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::IoError, "cannot move " + tmp.string() + ": " + ec.message());
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json(const fs::path& path, ErrorKind missing) {
  std::ifstream f(path);
  if (!f) fail(missing, "cannot read " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    fail(missing == ErrorKind::IoError ? ErrorKind::ConfigInvalid : missing,
         path.string() + " is not valid JSON: " + e.what());
  }
}

inline std::string state_file(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d.json", index);
  return buf;
}

}  // namespace detail

/// Parses and validates a configuration object. `mode` overrides a missing
/// "mode" field and must agree with a present one.
inline RunConfig parse_config(const json& raw, std::optional<Mode> mode = std::nullopt) {
  using detail::get_or;
  if (!raw.is_object()) fail(ErrorKind::ConfigInvalid, "the configuration must be a JSON object");
  RunConfig cfg;
  cfg.raw = raw;
  std::optional<Mode> from_file;
  if (raw.contains("mode")) {
    from_file = parse_mode(get_or<std::string>(raw, "mode", ""));
    if (!from_file) fail(ErrorKind::ConfigInvalid, "unknown mode '" + raw["mode"].dump() + "'");
  }
  if (mode && from_file && *mode != *from_file)
    fail(ErrorKind::ConfigInvalid, "subcommand '" + mode_name(*mode) + "' disagrees with config mode '" +
                                       mode_name(*from_file) + "'");
  if (!mode && !from_file) fail(ErrorKind::ConfigInvalid, "no mode given");
  cfg.mode = mode ? *mode : *from_file;
  cfg.out_dir = get_or<std::string>(raw, "output", "");

  const json num = raw.value("numerics", json::object());
  cfg.n = get_or<int>(num, "N", 128);
  if (cfg.n < 16 || cfg.n % 2 != 0) fail(ErrorKind::ConfigInvalid, "N must be even and at least 16");
  cfg.newton.tol = get_or<double>(num, "newton_tol", cfg.newton.tol);
  cfg.newton.max_iter = get_or<int>(num, "max_iter", cfg.newton.max_iter);
  cfg.k_max = get_or<int>(num, "k_max", 8);
  cfg.tau_par = get_or<double>(num, "tau_par", -1.0);
  cfg.flow.dt0 = get_or<double>(num, "dt0", cfg.flow.dt0);
  cfg.flow.dt_min = get_or<double>(num, "dt_min", cfg.flow.dt_min);
  cfg.flow.dt_max = get_or<double>(num, "dt_max", cfg.flow.dt_max);
  cfg.flow.k_max = cfg.k_max;
  cfg.flow.newton = cfg.newton;
  if (!(cfg.newton.tol > 0.0) || cfg.newton.max_iter < 1 || cfg.k_max < 0 || !(cfg.flow.dt_min > 0.0) ||
      cfg.flow.dt_min > cfg.flow.dt_max)
    fail(ErrorKind::ConfigInvalid, "numeric options out of range");
  cfg.t0 = get_or<double>(raw, "t0", 0.0);

  if (cfg.mode == Mode::Oracle) {
    detail::require(raw, "Q_values", cfg.mode);
    cfg.q_values = get_or<std::vector<double>>(raw, "Q_values", {});
    cfg.oracle_dim = get_or<int>(raw, "n", 2);
    if (cfg.oracle_dim != 2 && cfg.oracle_dim != 3) fail(ErrorKind::ConfigInvalid, "oracle dimension must be 2 or 3");
    return cfg;
  }

  const json cont = raw.value("container", json("unit_disk"));
  if (cont.is_string()) {
    if (cont.get<std::string>() != "unit_disk") fail(ErrorKind::ConfigInvalid, "unknown container " + cont.dump());
    cfg.container = BoundaryCurve::circle(Point::Zero(), 1.0);
  } else {
    try {
      cfg.container = curve_from_json(cont);
    } catch (const Error& e) {
      fail(ErrorKind::ConfigInvalid, std::string("container: ") + e.what());
    }
  }
  detail::require(raw, "schedule", cfg.mode);
  cfg.schedule = ScheduleSpec{raw["schedule"]};
  const QSchedule q = cfg.schedule->build();

  if (cfg.mode == Mode::Branch) {
    detail::require(raw, "Q_values", cfg.mode);
    detail::require(raw, "seeds", cfg.mode);
    cfg.q_values = get_or<std::vector<double>>(raw, "Q_values", {});
    for (const auto& s : raw["seeds"]) cfg.seeds.push_back(s.is_number() ? json{{"radius", s}} : s);
    if (cfg.q_values.empty() || cfg.seeds.empty()) fail(ErrorKind::ConfigInvalid, "branch needs Q values and seeds");
    for (double qv : cfg.q_values) detail::probe_positivity(cfg.schedule->build(qv), *cfg.container, cfg.t0, cfg.t0);
    for (const auto& s : cfg.seeds) {
      try {
        (void)curve_from_json(s);
      } catch (const Error& e) {
        fail(ErrorKind::ConfigInvalid, std::string("seed: ") + e.what());
      }
    }
    return cfg;
  }

  detail::require(raw, "initial", cfg.mode);
  cfg.initial = raw["initial"].is_number() ? json{{"radius", raw["initial"]}} : raw["initial"];
  try {
    (void)cfg.initial_curve();
  } catch (const Error& e) {
    fail(ErrorKind::ConfigInvalid, std::string("initial curve: ") + e.what());
  }
  if (cfg.mode == Mode::Moments && !is_unit_disk(*cfg.container))
    fail(ErrorKind::ConfigInvalid, "moments need the unit disk container");

  if (cfg.mode == Mode::Flow) {
    detail::require(raw, "flow", cfg.mode);
    const json f = raw["flow"];
    detail::require(f, "T", cfg.mode);
    detail::require(f, "case", cfg.mode);
    cfg.horizon = get_or<double>(f, "T", 0.0);
    if (!(cfg.horizon > 0.0)) fail(ErrorKind::ConfigInvalid, "flow horizon T must be positive");
    const std::string c = get_or<std::string>(f, "case", "");
    if (c == "A") cfg.flow.declared = FlowCase::A;
    else if (c == "B") cfg.flow.declared = FlowCase::B;
    else fail(ErrorKind::ConfigInvalid, "flow case must be \"A\" or \"B\"");
    const TimeSign want = cfg.flow.declared == FlowCase::A ? TimeSign::Positive : TimeSign::Negative;
    if (q.time_sign() != want)
      fail(ErrorKind::ConfigInvalid, "case " + c + " requires dQ/dt " +
                                         (want == TimeSign::Positive ? "> 0" : "< 0") + " for the whole run");
    detail::probe_positivity(q, *cfg.container, cfg.t0, cfg.t0 + cfg.horizon);
  } else {
    detail::probe_positivity(q, *cfg.container, cfg.t0, cfg.t0);
  }
  return cfg;
}

inline RunConfig load_config(const fs::path& path, std::optional<Mode> mode = std::nullopt) {
  return parse_config(detail::read_json(path, ErrorKind::IoError), mode);
}

/// Writes the per-run artifacts. The summary is a pure function of the
/// configuration; timing lives in its own file.
class RunWriter {
 public:
  RunWriter(fs::path dir, int k_max) : dir_(std::move(dir)), basis_(harmonic_test_basis(k_max)) {
    std::error_code ec;
    fs::create_directories(dir_ / "states", ec);
    if (ec) fail(ErrorKind::IoError, "cannot create " + (dir_ / "states").string() + ": " + ec.message());
    std::ostringstream h;
    h << "t,dt,residual_step,residual,drift,margin,kind,newton_iterations";
    for (const auto& b : basis_) h << ',' << b.label();
    rows_.push_back(h.str());
  }

  const fs::path& dir() const { return dir_; }

  void state(const SolutionState& s, std::optional<json> extra = std::nullopt) {
    json j = state_to_json(s);
    if (is_unit_disk(s.domain().outer) && s.inner().contains(Point::Zero())) j["moments"] = moments_to_json(moments(s, basis_));
    if (extra) j.update(*extra);
    detail::write_json(dir_ / "states" / detail::state_file(count_++), j);
  }

  void row(const StepDiagnostics& d, const SolutionState& s) {
    std::ostringstream r;
    r << fmt_double(d.t) << ',' << fmt_double(d.dt) << ',' << fmt_double(d.residual_step) << ','
      << fmt_double(d.residual) << ',' << (std::isnan(d.drift) ? std::string() : fmt_double(d.drift)) << ','
      << fmt_double(d.margin) << ',' << to_string(d.kind) << ',' << d.newton_iterations;
    std::vector<double> m = d.moments;
    if (m.empty() && is_unit_disk(s.domain().outer) && s.inner().contains(Point::Zero())) m = moments(s, basis_).values;
    for (std::size_t i = 0; i < basis_.size(); ++i) r << ',' << (i < m.size() ? fmt_double(m[i]) : std::string());
    rows_.push_back(r.str());
  }

  void flush_diagnostics() {
    std::string text;
    for (const auto& r : rows_) text += r + "\n";
    detail::write_text(dir_ / "diagnostics.csv", text);
  }

  int count() const { return count_; }

 private:
  fs::path dir_;
  std::vector<HarmonicTestFunction> basis_;
  std::vector<std::string> rows_;
  int count_ = 0;
};

namespace detail {

inline json terminal_json(const SolutionState& s) {
  json j = {{"t", s.t()},
            {"radius", s.inner().coefficients().a0},
            {"equivalent_radius", s.inner().equivalent_radius()},
            {"area", s.inner().area()},
            {"center", {s.inner().center().x(), s.inner().center().y()}},
            {"residual_norm", s.residual_norm},
            {"converged", s.converged},
            {"iterations", s.iterations},
            {"warnings", s.warnings}};
  if (s.classification) j["classification"] = classification_to_json(*s.classification, false);
  return j;
}

inline StepDiagnostics single_row(const SolutionState& s) {
  StepDiagnostics d;
  d.t = s.t();
  d.residual_step = s.history.empty() ? s.residual_norm : s.history.front();
  d.residual = s.residual_norm;
  d.newton_iterations = s.iterations;
  if (s.classification) {
    d.margin = s.classification->nondegeneracy_margin;
    d.kind = s.classification->kind;
  } else if (s.margin) {
    d.margin = *s.margin;
  }
  return d;
}

inline SolutionState solve_initial(const RunConfig& cfg, std::ostream* log) {
  auto q = std::make_shared<const QSchedule>(cfg.schedule->build());
  SolutionState s = eval_F(AnnularDomain(*cfg.container, cfg.initial_curve(), cfg.n), q, cfg.t0);
  if (log) *log << "initial residual " << fmt_double(s.residual_norm) << "\n";
  s = newton_correct(std::move(s), cfg.newton);
  if (log) *log << "newton converged in " << s.iterations << " iterations, residual " << fmt_double(s.residual_norm) << "\n";
  return s;
}

inline void run_oracle(const RunConfig& cfg, RunWriter& w, json& summary) {
  std::string csv = "Q,r1,r2,status\n";
  json rows = json::array();
  for (double qv : cfg.q_values) {
    const auto roots = radial::radial_branch_roots(qv, cfg.oracle_dim);
    std::string status = !roots ? "none" : (roots->lower.branch == radial::Branch::Critical ? "critical" : "two");
    const std::string r1 = roots ? fmt_double(roots->lower.r) : "";
    const std::string r2 = roots ? fmt_double(roots->upper.r) : "";
    csv += fmt_double(qv) + "," + r1 + "," + r2 + "," + status + "\n";
    json row = {{"Q", qv}, {"status", status}};
    if (roots) {
      row["r1"] = roots->lower.r;
      row["r2"] = roots->upper.r;
    }
    rows.push_back(row);
  }
  write_text(w.dir() / "oracle.csv", csv);
  const auto [rs, qs] = radial::critical(cfg.oracle_dim);
  summary["critical"] = {{"r", rs}, {"Q", qs}};
  summary["rows"] = rows;
}

inline void run_branch(const RunConfig& cfg, RunWriter& w, json& summary) {
  std::vector<BoundaryCurve> seeds;
  for (const auto& s : cfg.seeds) seeds.push_back(curve_from_json(s, std::max(1, cfg.n / 8)));
  const ScheduleSpec spec = *cfg.schedule;
  const auto rows =
      branch_sweep(*cfg.container, [&spec](double qv) { return spec.build(qv); }, cfg.q_values, seeds, cfg.n, cfg.t0,
                   cfg.newton);
  json out = json::array();
  for (const auto& r : rows) {
    json j = {{"Q", r.Q}, {"seed", r.seed}, {"kind", r.kind_label()}, {"converged", r.converged}};
    if (r.converged) {
      j["equivalent_radius"] = r.equivalent_radius;
      j["area"] = r.area;
      j["margin"] = r.margin;
      j["parabolic_flag"] = r.parabolic_flag;
      j["integral_p"] = r.integral_p;
      j["state_file"] = "states/" + state_file(w.count());
      w.state(*r.state, json{{"Q_level", r.Q}, {"seed", r.seed}});
      w.row(single_row(*r.state), *r.state);
    } else {
      j["error"] = error_to_json(*r.error, r.message);
    }
    out.push_back(j);
  }
  summary["rows"] = out;
}

inline int run_flow_mode(const RunConfig& cfg, RunWriter& w, json& summary, std::ostream* log) {
  SolutionState s0 = solve_initial(cfg, log);
  const FlowTrajectory tr = run_flow(std::move(s0), cfg.horizon, cfg.flow);
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    w.state(tr.states[i]);
    w.row(tr.diagnostics[i], tr.states[i]);
    if (log)
      *log << "t=" << fmt_double(tr.times[i]) << " kind=" << to_string(tr.diagnostics[i].kind)
           << " residual=" << fmt_double(tr.diagnostics[i].residual) << "\n";
  }
  double max_res = 0.0;
  for (const auto& d : tr.diagnostics) max_res = std::max(max_res, d.residual);
  summary["termination"] = std::string(to_string(tr.termination));
  summary["states"] = tr.states.size();
  summary["rejected_steps"] = tr.rejected_steps;
  summary["max_residual"] = max_res;
  summary["max_drift"] = tr.max_drift();
  summary["terminal"] = terminal_json(tr.states.back());
  if (tr.error_kind) {
    summary["status"] = "error";
    summary["error"] = error_to_json(*tr.error_kind, tr.error_message);
    return exit_code_for(*tr.error_kind);
  }
  return Ok;
}

}  // namespace detail

struct RunResult {
  int exit_code = 0;
  fs::path dir;
  json summary;
};

/// Runs a parsed configuration into `dir`. Solver failures are recorded in
/// summary.json; only an unwritable directory escapes as an exception.
inline RunResult run(const RunConfig& cfg, const fs::path& dir, bool verbose = false) {
  const auto t_start = std::chrono::steady_clock::now();
  std::ostream* log = verbose ? &std::cerr : nullptr;
  RunResult res{Ok, dir, json::object()};
  json& summary = res.summary;
  summary["mode"] = mode_name(cfg.mode);
  summary["status"] = "ok";

  RunWriter w(dir, cfg.k_max);
  detail::write_json(dir / "config-echo.json", json{{"config", cfg.raw}, {"resolved", cfg.resolved()}});
  try {
    switch (cfg.mode) {
      case Mode::Oracle: detail::run_oracle(cfg, w, summary); break;
      case Mode::Branch: detail::run_branch(cfg, w, summary); break;
      case Mode::Flow: res.exit_code = detail::run_flow_mode(cfg, w, summary, log); break;
      case Mode::Solve:
      case Mode::Classify:
      case Mode::Moments: {
        SolutionState s = detail::solve_initial(cfg, log);
        if (cfg.mode != Mode::Solve) classify(s, cfg.tau_par);
        if (cfg.mode == Mode::Moments) {
          const auto basis = harmonic_test_basis(cfg.k_max);
          summary["moments"] = moments_to_json(moments(s, basis));
          json qr = json::object();
          for (const auto& h : basis) qr[h.label()] = quadrature_residual(s, h);
          summary["quadrature_residuals"] = qr;
          summary["max_quadrature_residual"] = max_quadrature_residual(s, basis);
        }
        w.state(s);
        w.row(detail::single_row(s), s);
        summary["terminal"] = detail::terminal_json(s);
        break;
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IoError) throw;
    summary["status"] = "error";
    summary["error"] = error_to_json(e.kind(), e.what());
    res.exit_code = exit_code_for(e.kind());
  }
  w.flush_diagnostics();
  detail::write_json(dir / "summary.json", summary);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  detail::write_json(dir / "timing.json", json{{"wall_seconds", wall}});
  return res;
}

/// Loads, validates and runs a configuration file. Configuration and I/O
/// failures still produce a summary.json with the error when the output
/// directory is known.
inline RunResult run_config(const fs::path& config_path, std::optional<Mode> mode = std::nullopt,
                            std::optional<fs::path> out = std::nullopt, bool verbose = false) {
  fs::path dir = out ? *out : fs::path();
  try {
    const json raw = detail::read_json(config_path, ErrorKind::IoError);
    if (dir.empty() && raw.is_object() && raw.contains("output") && raw["output"].is_string())
      dir = raw["output"].get<std::string>();
    const RunConfig cfg = parse_config(raw, mode);
    if (dir.empty()) fail(ErrorKind::ConfigInvalid, "no output directory (use --out or \"output\")");
    return run(cfg, dir, verbose);
  } catch (const Error& e) {
    RunResult res{exit_code_for(e.kind()), dir, json{{"status", "error"}, {"error", error_to_json(e.kind(), e.what())}}};
    if (mode) res.summary["mode"] = mode_name(*mode);
    if (!dir.empty()) {
      try {
        std::error_code ec;
        fs::create_directories(dir, ec);
        detail::write_json(dir / "summary.json", res.summary);
      } catch (const Error&) {
      }
    }
    return res;
  }
}

/// Plot tables from a finished run: curves.csv (every stored state),
/// branch.csv (branch runs) and drift.csv (runs with moment columns).
inline std::vector<fs::path> emit_plot_data(const fs::path& dir, int samples = 128) {
  if (!fs::exists(dir / "summary.json")) fail(ErrorKind::MissingArtifacts, "no summary.json in " + dir.string());
  const json summary = detail::read_json(dir / "summary.json", ErrorKind::MissingArtifacts);
  std::vector<fs::path> written;

  std::vector<fs::path> states;
  if (fs::is_directory(dir / "states"))
    for (const auto& e : fs::directory_iterator(dir / "states"))
      if (e.path().extension() == ".json") states.push_back(e.path());
  std::sort(states.begin(), states.end());
  const std::string mode = summary.value("mode", "");
  if (states.empty() && mode != "oracle") fail(ErrorKind::MissingArtifacts, "no state files in " + dir.string());

  if (!states.empty()) {
    std::string csv = "snapshot,t,theta,x,y\n";
    for (std::size_t s = 0; s < states.size(); ++s) {
      const json j = detail::read_json(states[s], ErrorKind::MissingArtifacts);
      const BoundaryCurve c = curve_from_json(j.at("curve"));
      const std::string t = fmt_double(j.value("t", 0.0));
      for (int i = 0; i < samples; ++i) {
        const double th = two_pi * i / samples;
        const Point p = c.point(th);
        csv += std::to_string(s) + "," + t + "," + fmt_double(th) + "," + fmt_double(p.x()) + "," + fmt_double(p.y()) + "\n";
      }
    }
    detail::write_text(dir / "curves.csv", csv);
    written.push_back(dir / "curves.csv");
  }

  if (summary.contains("rows") && mode == "branch") {
    std::string csv = "Q,seed,equivalent_radius,kind,margin\n";
    for (const auto& r : summary["rows"]) {
      csv += fmt_double(r.at("Q").get<double>()) + "," + std::to_string(r.at("seed").get<int>()) + ",";
      csv += r.contains("equivalent_radius") ? fmt_double(r["equivalent_radius"].get<double>()) : std::string();
      csv += "," + r.at("kind").get<std::string>() + ",";
      csv += r.contains("margin") ? fmt_double(r["margin"].get<double>()) : std::string();
      csv += "\n";
    }
    detail::write_text(dir / "branch.csv", csv);
    written.push_back(dir / "branch.csv");
  }

  if (fs::exists(dir / "diagnostics.csv") && mode == "flow") {
    std::ifstream f(dir / "diagnostics.csv");
    std::string line, csv = "t,drift\n";
    std::getline(f, line);
    while (std::getline(f, line)) {
      std::vector<std::string> cells;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
      if (cells.size() > 4) csv += cells[0] + "," + cells[4] + "\n";
    }
    detail::write_text(dir / "drift.csv", csv);
    written.push_back(dir / "drift.csv");
  }
  return written;
}

}  // namespace bernoulli::cli
