#pragma once

// Three-level Lambda atom in a cavity: excited |a> (index 0) decays to |b>
// (index 1) and |c> (index 2) through two channels with time-dependent rates
// fixed by a Lorentzian spectral density centred on the cavity frequency.
//
// Rates, with x = omega - omega_cav and Delta_i = omega_i - omega_cav:
//   gamma_i(t) = int_0^t ds int dx J(x) cos((x - Delta_i) s)
//   shift_i(t) = int_0^t ds int dx J(x) sin((x - Delta_i) s)
// The x-range is [-omega_cav, cutoff] by default (omega from 0), or the whole
// real line in extended-line mode, where the rates depend on Delta_i only.

#include <memory>
#include <vector>

#include "infoflow/channel.hpp"

namespace infoflow::models {

struct LambdaParams {
  double gamma0;
  double lambda;
  double delta1;
  double delta2;
  double omega_cav = 50.0;  // only enters when the omega integral starts at 0
};

void validate(const LambdaParams& p);

struct QuadratureConfig {
  bool extended_line = false;
  double omega_cutoff = 40.0;     // upper omega limit is omega_cav + omega_cutoff * lambda
  double max_panel_width = 0.5;   // Gauss-Legendre panel width, units of lambda
  double max_panel_phase = 3.141592653589793;  // oscillation phase per panel
  double s_step = 0.005;          // s-grid step for lambda_solution, units of 1/lambda
  double rel_tol = 1e-8;          // node-doubling convergence criterion
  int max_doublings = 6;
};

void validate(const QuadratureConfig& q);

/// Spectral density J(x) = (gamma0 / 2 pi) lambda^2 / (x^2 + lambda^2), x = omega - omega_cav.
double lambda_spectral_density(const LambdaParams& p, double x);

struct LambdaRates {
  double gamma1;
  double gamma2;
  double shift1;  // lambda_1(t), the Lamb-shift-like Hamiltonian rate
  double shift2;
};

/// Direct evaluation at one time: the s-integral is done in closed form, the
/// omega integral by composite Gauss-Legendre with panel doubling.
/// Throws QuadratureNotConverged.
LambdaRates lambda_rates(const LambdaParams& p, double t, const QuadratureConfig& quad = {});

/// gamma_i(t -> infinity) in extended-line mode: gamma0 lambda^2 / (2 (Delta_i^2 + lambda^2)).
double lambda_rate_limit_extended(const LambdaParams& p, int channel);

struct LambdaSolution {
  Complex f;  // exp(-(D1 + D2)/2) exp(-i (L1 + L2))
  double g1;
  double g2;
  double D1;
  double D2;
  double L1;
  double L2;
};

/// rho_aa -> |f|^2 rho_aa, rho_bb -> g1 rho_aa + rho_bb, rho_cc -> g2 rho_aa + rho_cc,
/// rho_ab -> f rho_ab, rho_ac -> f rho_ac, rho_bc fixed.
Superoperator lambda_map(Complex f, double g1, double g2);

/// Cumulative solution of the rate integrals on a uniform s-grid, cached at the
/// grid nodes and interpolated (cubic Hermite) in between. Built eagerly;
/// all accessors are const and safe to call concurrently.
class LambdaTrajectory {
 public:
  LambdaTrajectory(const LambdaParams& p, const QuadratureConfig& quad, const TimeGrid& grid);

  const LambdaParams& params() const noexcept { return params_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  /// RK4 steps per grid interval after node doubling converged.
  std::size_t substeps() const noexcept { return substeps_; }

  LambdaSolution solution(double t) const;
  LambdaRates rates(double t) const;
  /// |f(t)|^2 integrated alongside g1, g2 so that |f|^2 + g1 + g2 = 1 holds to roundoff.
  double excited_population(double t) const;
  Superoperator map(double t) const;

 private:
  struct Node {
    double gamma[2], shift[2];    // rates
    double dgamma[2], dshift[2];  // their derivatives (kernel values)
    double D[2], L[2], g[2], pop;
  };
  Node interpolate(double t) const;

  LambdaParams params_;
  TimeGrid grid_;
  std::size_t substeps_ = 1;
  std::vector<Node> nodes_;
};

/// Seven auxiliaries at time t, from a trajectory on [0, t] with step quad.s_step.
LambdaSolution lambda_solution(const LambdaParams& p, double t, const QuadratureConfig& quad = {});

/// Family over grid.t_max() backed by a LambdaTrajectory on `grid`.
MapFamily lambda_family(const LambdaParams& p, const QuadratureConfig& quad, const TimeGrid& grid);

/// -gamma_i(t) |f(t)|^2: the trace-distance rate for (|a><a|, |b><b|) (channel 1)
/// or (|a><a|, |c><c|) (channel 2).
double lambda_sigma(const LambdaParams& p, int channel, double t, const QuadratureConfig& quad = {});

/// Master equation with H(t) = (shift1 + shift2)|a><a| and Lindblad operators
/// |b><a|, |c><a| at rates gamma1(t), gamma2(t), from lambda_rates.
GeneratorSpec lambda_generator(const LambdaParams& p, const QuadratureConfig& quad = {});

}  // namespace infoflow::models
