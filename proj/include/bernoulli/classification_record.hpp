#pragma once

#include <string_view>

#include "bernoulli/curve_geometry.hpp"

namespace bernoulli {

enum class SolutionKind { Elliptic, Hyperbolic, Parabolic };

inline std::string_view to_string(SolutionKind k) {
  switch (k) {
    case SolutionKind::Elliptic: return "Elliptic";
    case SolutionKind::Hyperbolic: return "Hyperbolic";
    case SolutionKind::Parabolic: return "Parabolic";
  }
  return "?";
}

struct ClassificationRecord {
  SolutionKind kind = SolutionKind::Parabolic;
  double integral_p = 0.0;
  bool monotone = false;
  double nondegeneracy_margin = 0.0;
  bool criterion_ok = false;
  /// Margin below the near-parabolic threshold: the kind is forced to Parabolic.
  bool parabolic_flag = false;
  /// Margin below the degeneracy threshold: the linear solve is untrusted.
  bool degenerate = false;
  BoundaryField p_trace;
};

}  // namespace bernoulli
