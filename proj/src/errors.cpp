#include "h1spec/errors.hpp"

namespace h1spec {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::OverlappingSegments: return "OverlappingSegments";
    case ErrorKind::NonIntegrableTau: return "NonIntegrableTau";
    case ErrorKind::SigmaNotLocallyL2: return "SigmaNotLocallyL2";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NonDifferentiableTheta: return "NonDifferentiableTheta";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::DegenerateDisk: return "DegenerateDisk";
    case ErrorKind::NotUpperHalfPlane: return "NotUpperHalfPlane";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::PositionsNotSparse: return "PositionsNotSparse";
    case ErrorKind::DecayViolated: return "DecayViolated";
    case ErrorKind::EmptyResult: return "EmptyResult";
    case ErrorKind::PhasePrecisionLoss: return "PhasePrecisionLoss";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::Usage: return "Usage";
  }
  return "UnknownError";
}

}  // namespace h1spec
