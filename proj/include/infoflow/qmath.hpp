#pragma once

// Small dense complex linear algebra for Hermitian operators, and the
// distance functions on density matrices.

#include <complex>

#include <Eigen/Dense>

namespace infoflow {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tolerance {
inline constexpr double kState = 1e-12;           // hermiticity, trace, positivity of states
inline constexpr double kReconstruction = 1e-10;  // eigen reconstruction, hermitian input
inline constexpr double kSupport = 1e-14;         // rank cutoff for relative entropy
}  // namespace tolerance

struct EigenDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // orthonormal columns
};

/// Largest entrywise |M - M^dagger|.
double hermitian_defect(const ComplexMatrix& m);

/// (M + M^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

/// Throws NonHermitian if the defect exceeds 1e-10.
EigenDecomposition hermitian_eigen(const ComplexMatrix& m);

/// Eigenvalues only (ascending). Same preconditions as hermitian_eigen.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

/// |A| = sqrt(A^dagger A), evaluated through the spectrum of Hermitian A.
ComplexMatrix operator_abs(const ComplexMatrix& a);

/// Tr|A| for Hermitian A.
double trace_norm(const ComplexMatrix& a);

/// A validated state: Hermitian, unit trace and positive semidefinite to 1e-12.
/// Obtain one through validate_density().
class DensityMatrix {
 public:
  Index dim() const noexcept { return rho_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return rho_; }
  Complex operator()(Index i, Index j) const { return rho_(i, j); }

  friend DensityMatrix validate_density(const ComplexMatrix& m);

 private:
  explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {}

  ComplexMatrix rho_;
};

/// Checks the state invariants and returns the state (hermitian part).
/// Errors: NonFinite, DimensionMismatch (non-square), NonHermitian,
/// TraceNotOne, NegativeEigenvalue.
DensityMatrix validate_density(const ComplexMatrix& m);

/// |psi><psi| / <psi|psi>
DensityMatrix pure_state(const ComplexVector& psi);

/// |k><k| in dimension dim.
DensityMatrix basis_state(Index dim, Index k);

DensityMatrix maximally_mixed(Index dim);

/// D = 1/2 Tr|r1 - r2|
double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2);

/// (1 + D) / 2, the optimal success probability of telling r1 from r2.
double distinguishability_probability(const DensityMatrix& r1, const DensityMatrix& r2);

/// sqrt(Tr[(r1 - r2)^2])
double hilbert_schmidt_distance(const DensityMatrix& r1, const DensityMatrix& r2);

/// Tr[r1 (ln r1 - ln r2)] in nats. `unbounded` is set, and `nats` is +inf,
/// when supp(r1) is not contained in supp(r2).
struct RelativeEntropy {
  double nats = 0.0;
  bool unbounded = false;
};

RelativeEntropy relative_entropy(const DensityMatrix& r1, const DensityMatrix& r2);

}  // namespace infoflow
