#pragma once

// Dynamical maps as superoperators on column-stacked density matrices:
// vec(rho)[i + j*d] = rho(i, j), so X -> A X B has matrix B^T (x) A.

#include <functional>
#include <vector>

#include "infoflow/grid.hpp"
#include "infoflow/qmath.hpp"

namespace infoflow {

ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v, Index dim);

class Superoperator {
 public:
  Superoperator(Index dim, ComplexMatrix matrix);

  static Superoperator identity(Index dim);
  /// The map X -> left * X * right.
  static Superoperator sandwich(const ComplexMatrix& left, const ComplexMatrix& right);

  Index dim() const noexcept { return dim_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  /// Set only by validated(): trace preservation and complete positivity were checked.
  bool is_validated() const noexcept { return validated_; }

  /// Linear action on an arbitrary operator, no state checks.
  ComplexMatrix act(const ComplexMatrix& x) const;

 private:
  friend Superoperator validated(Superoperator phi, double tol);

  Index dim_;
  ComplexMatrix matrix_;
  bool validated_ = false;
};

/// Checks TP and CP at `tol` and returns phi flagged as validated.
/// Throws InvalidOutputState when either check fails.
Superoperator validated(Superoperator phi, double tol = 1e-10);

/// phi(rho), re-symmetrized and validated as a state.
/// Errors: DimensionMismatch, InvalidOutputState.
DensityMatrix apply(const Superoperator& phi, const DensityMatrix& rho);

/// later o earlier
Superoperator compose(const Superoperator& later, const Superoperator& earlier);

struct ChoiMatrix {
  Index dim;
  ComplexMatrix matrix;  // sum_ij phi(|i><j|) (x) |i><j|, output factor first
};

ChoiMatrix choi_matrix(const Superoperator& phi);

struct CpReport {
  bool completely_positive;
  double min_eigenvalue;
};

CpReport is_completely_positive(const Superoperator& phi, double tol = 1e-10);
bool is_trace_preserving(const Superoperator& phi, double tol = 1e-10);

/// One dissipative channel of a time-local generator.
struct LindbladTerm {
  std::function<ComplexMatrix(double)> op;
  std::function<double(double)> rate;
};

/// K(t) rho = -i[H(t), rho] + sum_i rate_i(t) (A_i rho A_i^+ - {A_i^+ A_i, rho}/2)
struct GeneratorSpec {
  Index dim;
  std::function<ComplexMatrix(double)> hamiltonian;
  std::vector<LindbladTerm> terms;
};

/// Superoperator of K(t). Throws RateDivergence if any |rate| exceeds 1e12.
Superoperator generator_at(const GeneratorSpec& gen, double t);

/// Phi(t, 0) for t in [0, t_max]. The evaluator must be callable concurrently.
struct MapFamily {
  Index dim;
  double t_max;
  std::function<Superoperator(double)> evaluator;

  Superoperator at(double t) const;
};

/// exp(L t) for the generator frozen at t = 0.
MapFamily semigroup_family(const GeneratorSpec& gen, double t_max);

/// Phi(t + tau, 0) Phi(t, 0)^{-1}. Throws SingularPropagator when the
/// condition number of Phi(t, 0) exceeds 1e12.
Superoperator intermediate_map(const MapFamily& family, double t, double tau);

inline constexpr double kSingularCondition = 1e12;

enum class IntervalKind { CompletelyPositive, NotCompletelyPositive, Singular };

struct IntervalVerdict {
  double t_begin;
  double t_end;
  IntervalKind kind;
  double min_choi_eigenvalue;  // NaN when singular
  double condition;            // of Phi(t_begin, 0)
};

struct DivisibilityReport {
  std::vector<IntervalVerdict> intervals;  // one per consecutive grid pair
  std::vector<std::size_t> violations;     // indices into intervals
  bool divisible;
};

DivisibilityReport divisibility_scan(const MapFamily& family, const TimeGrid& grid, double tol = 1e-10);

/// Classical RK4 for d rho/dt = K(t) rho on the grid, `substeps` RK4 steps per
/// grid interval. Returns the (hermitian-symmetrized) state at every grid time.
/// Throws RateDivergence when a rate blows up at an evaluation point.
std::vector<ComplexMatrix> integrate_time_local(const GeneratorSpec& gen, const DensityMatrix& rho0,
                                                const TimeGrid& grid, std::size_t substeps = 1);

/// Same, starting from `rho0` at time t_start rather than 0.
std::vector<ComplexMatrix> integrate_time_local(const GeneratorSpec& gen, const ComplexMatrix& rho0,
                                                double t_start, double t_end, std::size_t steps);

/// K(t) = d/dtau Phi(t + tau, t) at tau = 0 by central differences of the
/// intermediate maps (second-order one-sided form when t < h).
Superoperator extract_generator(const MapFamily& family, double t, double h = 1e-5);

}  // namespace infoflow
