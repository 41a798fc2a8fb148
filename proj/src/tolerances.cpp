#include "nonholo/tolerances.hpp"

#include <cstdlib>

#include "nonholo/errors.hpp"

namespace nonholo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::DegenerateTriad: return "DegenerateTriad";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::InsufficientSampling: return "InsufficientSampling";
    case ErrorKind::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NonPositiveKernel: return "NonPositiveKernel";
    case ErrorKind::EigenFailure: return "EigenFailure";
  }
  return "Unknown";
}

bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::Io:
    case ErrorKind::Validation:
    case ErrorKind::GridMismatch:
      return true;
    default:
      return false;
  }
}

Tolerances Tolerances::from_profile(const std::string& name) {
  Tolerances tol;
  tol.profile = name;
  if (name == "default") return tol;
  if (name == "strict") {
    tol.degenerate_triad_floor = 1e-10;
    tol.defect_core_radius = 1e-6;
    tol.max_hop_ratio = 0.5;
    tol.kernel_cutoff_widths = 8.0;
    return tol;
  }
  if (name == "loose") {
    tol.degenerate_triad_floor = 1e-14;
    tol.max_hop_ratio = 1.5;
    tol.kernel_cutoff_widths = 5.0;
    return tol;
  }
  throw Error(ErrorKind::Validation, "unknown tolerance profile '" + name + "'");
}

const Tolerances& default_tolerances() {
  static const Tolerances tol = [] {
    const char* env = std::getenv("NONHOLO_TOLERANCE_PROFILE");
    return Tolerances::from_profile(env && *env ? env : "default");
  }();
  return tol;
}

}  // namespace nonholo
