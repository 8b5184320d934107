#pragma once

#include <stdexcept>
#include <string>

namespace h1spec {

enum class ErrorKind {
  // potential construction
  OverlappingSegments,
  NonIntegrableTau,
  SigmaNotLocallyL2,
  InvalidParams,
  NonDifferentiableTheta,
  // propagation
  OutOfRange,
  ToleranceNotMet,
  // prufer
  ZeroVector,
  // weyl
  DegenerateDisk,
  NotUpperHalfPlane,
  NoConvergence,
  // sparse
  PositionsNotSparse,
  DecayViolated,
  EmptyResult,
  PhasePrecisionLoss,
  // cli
  ParseError,
  ValidationError,
  Usage,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// exit-code groups used by the CLI: 2 = validation, 3 = numerical
inline bool is_validation_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::OverlappingSegments:
    case ErrorKind::NonIntegrableTau:
    case ErrorKind::SigmaNotLocallyL2:
    case ErrorKind::InvalidParams:
    case ErrorKind::NonDifferentiableTheta:
    case ErrorKind::OutOfRange:
    case ErrorKind::ZeroVector:
    case ErrorKind::PositionsNotSparse:
    case ErrorKind::DecayViolated:
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
      return true;
    default:
      return false;
  }
}

}  // namespace h1spec
