#include "infoflow/models/jc.hpp"

#include <cmath>
#include <string>

#include "infoflow/error.hpp"

namespace infoflow::models {
namespace {

// sinh(z) / z, finite at z = 0.
Complex sinhc(Complex z) {
  if (std::abs(z) < 1e-3) {
    const Complex z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

}  // namespace

Complex JCParams::decay_constant() const {
  return std::sqrt(Complex(lambda * lambda - 2.0 * gamma0 * lambda, 0.0));
}

void validate(const JCParams& p) {
  if (!(p.gamma0 > 0.0) || !std::isfinite(p.gamma0)) {
    throw Error(Errc::InvalidArgument, "JC gamma0 must be positive, got " + std::to_string(p.gamma0));
  }
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
    throw Error(Errc::InvalidArgument, "JC lambda must be positive, got " + std::to_string(p.lambda));
  }
}

Complex jc_amplitude_with_branch(const JCParams& p, double t, Complex d) {
  const Complex z = 0.5 * d * t;
  const double half_lt = 0.5 * p.lambda * t;
  if (z.real() > 20.0) {
    // cosh/sinh overflow long before the product does; combine the exponents.
    return 0.5 * ((1.0 + p.lambda / d) * std::exp(z - half_lt) + (1.0 - p.lambda / d) * std::exp(-z - half_lt));
  }
  return std::exp(-half_lt) * (std::cosh(z) + half_lt * sinhc(z));
}

Complex jc_amplitude(const JCParams& p, double t) { return jc_amplitude_with_branch(p, t, p.decay_constant()); }

Complex jc_amplitude_derivative(const JCParams& p, double t) {
  const Complex d = p.decay_constant();
  const Complex z = 0.5 * d * t;
  const double half_lt = 0.5 * p.lambda * t;
  if (z.real() > 20.0) {
    return -(p.gamma0 * p.lambda / (2.0 * d)) * (std::exp(z - half_lt) - std::exp(-z - half_lt));
  }
  return -p.gamma0 * half_lt * std::exp(-half_lt) * sinhc(z);
}

double jc_abs_amplitude_derivative(const JCParams& p, double t) {
  const Complex g = jc_amplitude(p, t);
  const Complex dg = jc_amplitude_derivative(p, t);
  const double mod = std::abs(g);
  if (mod == 0.0) return std::abs(dg);
  return (std::conj(g) * dg).real() / mod;
}

std::vector<Complex> jc_amplitude_ode(const JCParams& p, const TimeGrid& grid, std::size_t substeps) {
  const double h = grid.step() / static_cast<double>(substeps);
  const double stiffness = 0.5 * p.gamma0 * p.lambda;
  auto rhs = [&](Complex g, Complex dg, Complex& out_g, Complex& out_dg) {
    out_g = dg;
    out_dg = -p.lambda * dg - stiffness * g;
  };
  std::vector<Complex> out;
  out.reserve(grid.size());
  Complex g = 1.0;
  Complex dg = 0.0;
  out.push_back(g);
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    for (std::size_t s = 0; s < substeps; ++s) {
      Complex a1, b1, a2, b2, a3, b3, a4, b4;
      rhs(g, dg, a1, b1);
      rhs(g + 0.5 * h * a1, dg + 0.5 * h * b1, a2, b2);
      rhs(g + 0.5 * h * a2, dg + 0.5 * h * b2, a3, b3);
      rhs(g + h * a3, dg + h * b3, a4, b4);
      g += (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
      dg += (h / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    }
    out.push_back(g);
  }
  return out;
}

Superoperator jc_map(Complex g) {
  const double pop = std::norm(g);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  // column-stacked indices: (0,0)->0, (1,0)->1, (0,1)->2, (1,1)->3
  m(0, 0) = pop;
  m(3, 0) = 1.0 - pop;
  m(3, 3) = 1.0;
  m(2, 2) = g;
  m(1, 1) = std::conj(g);
  return Superoperator(2, std::move(m));
}

MapFamily jc_family(const JCParams& p, double t_max) {
  validate(p);
  return {2, t_max, [p](double t) { return jc_map(jc_amplitude(p, t)); }};
}

Superoperator jc_intermediate_exact(const JCParams& p, double t, double tau) {
  const Complex g_t = jc_amplitude(p, t);
  if (std::abs(g_t) == 0.0) throw Error(Errc::SingularPropagator, "G(t) = 0");
  return jc_map(jc_amplitude(p, t + tau) / g_t);
}

JCRates jc_rates(const JCParams& p, double t) {
  const Complex g = jc_amplitude(p, t);
  if (std::abs(g) <= 1e-12) {
    throw Error(Errc::RateDivergence, "G(t) vanishes at t = " + std::to_string(t));
  }
  const Complex log_derivative = jc_amplitude_derivative(p, t) / g;
  return {-2.0 * log_derivative.real(), -2.0 * log_derivative.imag()};
}

GeneratorSpec jc_generator(const JCParams& p) {
  validate(p);
  GeneratorSpec gen;
  gen.dim = 2;
  gen.hamiltonian = [p](double t) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 0.5 * jc_rates(p, t).shift;  // (S/2) sigma+ sigma-
    return h;
  };
  ComplexMatrix lowering = ComplexMatrix::Zero(2, 2);
  lowering(1, 0) = 1.0;
  gen.terms.push_back({[lowering](double) { return lowering; }, [p](double t) { return jc_rates(p, t).gamma; }});
  return gen;
}

QubitPairParams qubit_pair_params(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != 2 || rho2.dim() != 2) throw Error(Errc::DimensionMismatch, "qubit pair expected");
  return {(rho1(0, 0) - rho2(0, 0)).real(), rho1(0, 1) - rho2(0, 1)};
}

double jc_sigma_analytic(const JCParams& p, const QubitPairParams& pair, double t) {
  const double b2 = std::norm(pair.b);
  if (pair.a == 0.0 && b2 == 0.0) throw Error(Errc::DegeneratePair, "a = 0 and b = 0");
  const double mod = std::abs(jc_amplitude(p, t));
  const double slope = jc_abs_amplitude_derivative(p, t);
  const double a2 = pair.a * pair.a;
  if (b2 == 0.0) return 2.0 * std::abs(pair.a) * mod * slope;  // D = |a| |G|^2
  return (2.0 * mod * mod * a2 + b2) / std::sqrt(mod * mod * a2 + b2) * slope;
}

}  // namespace infoflow::models
