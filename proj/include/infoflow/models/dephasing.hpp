#pragma once

// Pure de- and re-phasing of a qubit: populations fixed, coherences scaled by
// g(t) = (1 + cos^2(omega t)) / 2. Same basis as the JC model.

#include "infoflow/channel.hpp"

namespace infoflow::models {

struct DephasingParams {
  double omega;
};

void validate(const DephasingParams& p);

/// g(t), in [1/2, 1].
double dephasing_coherence(const DephasingParams& p, double t);
double dephasing_coherence_derivative(const DephasingParams& p, double t);

/// Populations unchanged, rho_+- -> g rho_+-, rho_-+ -> g rho_-+.
Superoperator dephasing_map(double g);

MapFamily dephasing_family(const DephasingParams& p, double t_max);

/// Gamma = -ln g(t0): exp(L) with L rho = (Gamma/2)(sigma3 rho sigma3 - rho) equals Phi(t0, 0).
double dephasing_snapshot_rate(const DephasingParams& p, double t0);

/// The time-independent generator (Gamma/2)(sigma3 rho sigma3 - rho).
GeneratorSpec dephasing_snapshot_generator(double gamma);

}  // namespace infoflow::models
