#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bernoulli {

enum class ErrorKind {
  NonStarShaped,
  ResolutionTooLow,
  GridMismatch,
  SingularSystem,
  BoundaryTooClose,
  DegenerateOperator,
  TooCloseToBoundary,
  OuterNotDisk,
  NoConvergence,
  OutOfRange,
  DegenerateRadius,
  SignMismatch,
  StepSizeUnderflow,
  MuTooSmall,
  OriginNotEnclosed,
  ConfigInvalid,
  MissingArtifacts,
  IoError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonStarShaped: return "NonStarShaped";
    case ErrorKind::ResolutionTooLow: return "ResolutionTooLow";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::BoundaryTooClose: return "BoundaryTooClose";
    case ErrorKind::DegenerateOperator: return "DegenerateOperator";
    case ErrorKind::TooCloseToBoundary: return "TooCloseToBoundary";
    case ErrorKind::OuterNotDisk: return "OuterNotDisk";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateRadius: return "DegenerateRadius";
    case ErrorKind::SignMismatch: return "SignMismatch";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::MuTooSmall: return "MuTooSmall";
    case ErrorKind::OriginNotEnclosed: return "OriginNotEnclosed";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::MissingArtifacts: return "MissingArtifacts";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace bernoulli
