#pragma once

// Two-level atom coupled on resonance to a Lorentzian reservoir in the vacuum
// state (damped Jaynes-Cummings model). Basis: index 0 = |+> (excited),
// index 1 = |-> (ground).

#include <vector>

#include "infoflow/channel.hpp"

namespace infoflow::models {

struct JCParams {
  double gamma0;  // coupling strength
  double lambda;  // spectral width

  /// sqrt(lambda^2 - 2 gamma0 lambda), principal branch, imaginary above gamma0 = lambda/2.
  Complex decay_constant() const;
};

void validate(const JCParams& p);

/// G(t), the excited-state amplitude (G(0) = 1).
Complex jc_amplitude(const JCParams& p, double t);
Complex jc_amplitude_derivative(const JCParams& p, double t);

/// Same amplitude with an explicit choice of the square-root branch for d.
Complex jc_amplitude_with_branch(const JCParams& p, double t, Complex d);

/// d|G|/dt. At an exact zero of G the one-sided (rising) slope |G'| is returned.
double jc_abs_amplitude_derivative(const JCParams& p, double t);

/// G on a grid from the local ODE G'' + lambda G' + (gamma0 lambda / 2) G = 0,
/// G(0) = 1, G'(0) = 0, by RK4 with `substeps` steps per grid interval.
std::vector<Complex> jc_amplitude_ode(const JCParams& p, const TimeGrid& grid, std::size_t substeps = 8);

/// rho_++ -> |G|^2 rho_++, rho_-- -> rho_-- + (1 - |G|^2) rho_++, rho_+- -> G rho_+-.
Superoperator jc_map(Complex g);

MapFamily jc_family(const JCParams& p, double t_max);

/// Phi(t + tau, t) in closed form, from the ratio G(t + tau) / G(t).
Superoperator jc_intermediate_exact(const JCParams& p, double t, double tau);

struct JCRates {
  double gamma;  // decay rate -2 Re(G'/G)
  double shift;  // S(t) = -2 Im(G'/G)
};

/// Throws RateDivergence when |G(t)| <= 1e-12.
JCRates jc_rates(const JCParams& p, double t);

/// K(t) rho = -i S/2 [sigma+ sigma-, rho] + gamma (sigma- rho sigma+ - {sigma+ sigma-, rho}/2)
GeneratorSpec jc_generator(const JCParams& p);

/// Differences of the initial populations and coherences of a qubit pair.
struct QubitPairParams {
  double a;   // rho1_++ - rho2_++
  Complex b;  // rho1_+- - rho2_+-
};

QubitPairParams qubit_pair_params(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// d/dt of the trace distance along the family for a pair with differences (a, b).
/// Throws DegeneratePair when a = b = 0.
double jc_sigma_analytic(const JCParams& p, const QubitPairParams& pair, double t);

}  // namespace infoflow::models
