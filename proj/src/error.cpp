#include "infoflow/error.hpp"

namespace infoflow {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::TraceNotOne: return "TraceNotOne";
    case Errc::NegativeEigenvalue: return "NegativeEigenvalue";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidOutputState: return "InvalidOutputState";
    case Errc::SingularPropagator: return "SingularPropagator";
    case Errc::RateDivergence: return "RateDivergence";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::QuadratureNotConverged: return "QuadratureNotConverged";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_numerical_failure(Errc code) noexcept {
  switch (code) {
    case Errc::SingularPropagator:
    case Errc::RateDivergence:
    case Errc::QuadratureNotConverged:
    case Errc::InvalidOutputState:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace infoflow
