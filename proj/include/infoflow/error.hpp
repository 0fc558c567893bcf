#pragma once

#include <stdexcept>
#include <string>

namespace infoflow {

enum class Errc {
  NonFinite,
  NonHermitian,
  TraceNotOne,
  NegativeEigenvalue,
  DimensionMismatch,
  InvalidOutputState,
  SingularPropagator,
  RateDivergence,
  DegeneratePair,
  QuadratureNotConverged,
  InvalidArgument,
};

const char* to_string(Errc code) noexcept;

// Failures of the numerical pipeline itself, as opposed to bad user input.
bool is_numerical_failure(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace infoflow
