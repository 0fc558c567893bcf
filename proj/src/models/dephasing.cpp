#include "infoflow/models/dephasing.hpp"

#include <cmath>
#include <string>

#include "infoflow/error.hpp"

namespace infoflow::models {

void validate(const DephasingParams& p) {
  if (!(p.omega > 0.0) || !std::isfinite(p.omega)) {
    throw Error(Errc::InvalidArgument, "dephasing omega must be positive, got " + std::to_string(p.omega));
  }
}

double dephasing_coherence(const DephasingParams& p, double t) {
  const double c = std::cos(p.omega * t);
  return 0.5 * (1.0 + c * c);
}

double dephasing_coherence_derivative(const DephasingParams& p, double t) {
  // d/dt (1 + cos^2)/2 = -omega sin cos = -(omega/2) sin(2 omega t)
  return -0.5 * p.omega * std::sin(2.0 * p.omega * t);
}

Superoperator dephasing_map(double g) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(3, 3) = 1.0;
  m(1, 1) = g;
  m(2, 2) = g;
  return Superoperator(2, std::move(m));
}

MapFamily dephasing_family(const DephasingParams& p, double t_max) {
  validate(p);
  return {2, t_max, [p](double t) { return dephasing_map(dephasing_coherence(p, t)); }};
}

double dephasing_snapshot_rate(const DephasingParams& p, double t0) {
  if (!(t0 >= 0.0)) throw Error(Errc::InvalidArgument, "snapshot time must be >= 0");
  return -std::log(dephasing_coherence(p, t0));
}

GeneratorSpec dephasing_snapshot_generator(double gamma) {
  // (Gamma/2)(s3 rho s3 - rho) is the Lindblad form with A = s3 and rate Gamma/2,
  // since s3^dagger s3 = 1.
  ComplexMatrix sigma3 = ComplexMatrix::Zero(2, 2);
  sigma3(0, 0) = 1.0;
  sigma3(1, 1) = -1.0;
  GeneratorSpec gen;
  gen.dim = 2;
  gen.terms.push_back({[sigma3](double) { return sigma3; }, [gamma](double) { return 0.5 * gamma; }});
  return gen;
}

}  // namespace infoflow::models
