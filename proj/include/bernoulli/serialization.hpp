#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "bernoulli/bernoulli_operator.hpp"
#include "bernoulli/classification_record.hpp"
#include "bernoulli/conserved_moments.hpp"
#include "bernoulli/curve_geometry.hpp"
#include "bernoulli/errors.hpp"

namespace bernoulli {

using json = nlohmann::json;

/// Shortest decimal that reads back to the same double.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline json curve_to_json(const BoundaryCurve& c) {
  const auto& k = c.coefficients();
  return {{"center", {c.center().x(), c.center().y()}}, {"a0", k.a0}, {"cos", k.cos}, {"sin", k.sin}};
}

inline Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::ConfigInvalid, "a point must be a two-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

/// Accepts {center, a0, cos, sin} or {center, radius}; the center defaults to
/// the origin. The result carries at least `min_degree` modes.
inline BoundaryCurve curve_from_json(const json& j, int min_degree = 0) {
  if (!j.is_object()) fail(ErrorKind::ConfigInvalid, "a curve must be a JSON object");
  const Point c = j.contains("center") ? point_from_json(j["center"]) : Point::Zero();
  FourierCoefficients k;
  try {
    if (j.contains("radius")) {
      k.a0 = j["radius"].get<double>();
    } else {
      k.a0 = j.at("a0").get<double>();
      k.cos = j.value("cos", std::vector<double>{});
      k.sin = j.value("sin", std::vector<double>{});
      if (k.cos.size() != k.sin.size()) fail(ErrorKind::ConfigInvalid, "cos and sin lists differ in length");
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigInvalid, std::string("bad curve: ") + e.what());
  }
  const std::size_t deg = std::max<std::size_t>(k.cos.size(), static_cast<std::size_t>(std::max(min_degree, 0)));
  k.cos.resize(deg, 0.0);
  k.sin.resize(deg, 0.0);
  return BoundaryCurve(c, std::move(k));
}

inline json classification_to_json(const ClassificationRecord& r, bool with_trace = true) {
  json j = {{"kind", std::string(to_string(r.kind))},
            {"integral_p", r.integral_p},
            {"monotone", r.monotone},
            {"nondegeneracy_margin", r.nondegeneracy_margin},
            {"criterion_ok", r.criterion_ok},
            {"parabolic_flag", r.parabolic_flag},
            {"degenerate", r.degenerate}};
  if (with_trace) j["p_trace"] = to_std(r.p_trace);
  return j;
}

inline json moments_to_json(const MomentVector& m) {
  json j = json::object();
  for (std::size_t i = 0; i < m.values.size(); ++i) j[m.basis[i].label()] = m.values[i];
  return j;
}

inline json state_to_json(const SolutionState& s) {
  json j = {{"t", s.t()},
            {"curve", curve_to_json(s.inner())},
            {"equivalent_radius", s.inner().equivalent_radius()},
            {"area", s.inner().area()},
            {"residual_norm", s.residual_norm},
            {"converged", s.converged},
            {"iterations", s.iterations},
            {"history", s.history},
            {"warnings", s.warnings}};
  if (s.margin) j["margin"] = *s.margin;
  if (s.classification) j["classification"] = classification_to_json(*s.classification);
  return j;
}

inline json error_to_json(ErrorKind kind, const std::string& message) {
  return {{"kind", std::string(to_string(kind))}, {"message", message}};
}

}  // namespace bernoulli
