#include "infoflow/qmath.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "infoflow/error.hpp"

namespace infoflow {
namespace {

std::string format_magnitude(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(Errc::DimensionMismatch, std::string(what) + " must be a non-empty square matrix, got " +
                                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_same_dim(const DensityMatrix& r1, const DensityMatrix& r2) {
  if (r1.dim() != r2.dim()) {
    throw Error(Errc::DimensionMismatch,
                "states of dimension " + std::to_string(r1.dim()) + " and " + std::to_string(r2.dim()));
  }
}

void require_hermitian(const ComplexMatrix& m) {
  require_square(m, "hermitian operand");
  const double defect = hermitian_defect(m);
  if (!(defect <= tolerance::kReconstruction)) {
    throw Error(Errc::NonHermitian, "max |M - M^dagger| = " + format_magnitude(defect));
  }
}

// Closed form for the 2x2 case; this sits in every trace distance evaluation.
double trace_norm_2x2(const ComplexMatrix& a) {
  const double p = a(0, 0).real();
  const double r = a(1, 1).real();
  const Complex q = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
  const double mean = 0.5 * (p + r);
  const double half_gap = std::hypot(0.5 * (p - r), std::abs(q));
  return 2.0 * std::max(half_gap, std::abs(mean));
}

}  // namespace

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

EigenDecomposition hermitian_eigen(const ComplexMatrix& m) {
  require_hermitian(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  require_hermitian(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

ComplexMatrix operator_abs(const ComplexMatrix& a) {
  require_square(a, "operator_abs operand");
  if (hermitian_defect(a) <= tolerance::kReconstruction) {
    const EigenDecomposition eig = hermitian_eigen(a);
    return eig.eigenvectors * eig.eigenvalues.cwiseAbs().asDiagonal() * eig.eigenvectors.adjoint();
  }
  // General operand: spectral square root of the positive operator A^dagger A.
  const EigenDecomposition eig = hermitian_eigen(hermitian_part(a.adjoint() * a));
  const RealVector roots = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
}

double trace_norm(const ComplexMatrix& a) {
  require_hermitian(a);
  if (a.rows() == 2) return trace_norm_2x2(a);
  return hermitian_eigenvalues(a).cwiseAbs().sum();
}

DensityMatrix validate_density(const ComplexMatrix& m) {
  if (!all_finite(m)) throw Error(Errc::NonFinite, "density matrix has NaN or Inf entries");
  require_square(m, "density matrix");
  const double defect = hermitian_defect(m);
  if (!(defect <= tolerance::kState)) {
    throw Error(Errc::NonHermitian, "max |rho - rho^dagger| = " + format_magnitude(defect));
  }
  ComplexMatrix rho = hermitian_part(m);
  const double trace_error = std::abs(rho.trace().real() - 1.0);
  if (!(trace_error <= tolerance::kState)) {
    throw Error(Errc::TraceNotOne, "|Tr rho - 1| = " + format_magnitude(trace_error));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  const double lowest = solver.eigenvalues()(0);
  if (lowest < -tolerance::kState) {
    throw Error(Errc::NegativeEigenvalue, "lowest eigenvalue " + format_magnitude(lowest));
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix pure_state(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(Errc::InvalidArgument, "pure_state needs a finite non-zero vector");
  }
  const ComplexVector unit = psi / norm;
  return validate_density(unit * unit.adjoint());
}

DensityMatrix basis_state(Index dim, Index k) {
  if (k < 0 || k >= dim) throw Error(Errc::InvalidArgument, "basis index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return validate_density(m);
}

DensityMatrix maximally_mixed(Index dim) {
  return validate_density(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  require_same_dim(r1, r2);
  return 0.5 * trace_norm(r1.matrix() - r2.matrix());
}

double distinguishability_probability(const DensityMatrix& r1, const DensityMatrix& r2) {
  return 0.5 * (1.0 + trace_distance(r1, r2));
}

double hilbert_schmidt_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  require_same_dim(r1, r2);
  // Tr[X^2] = sum |X_ij|^2 for Hermitian X.
  return (r1.matrix() - r2.matrix()).norm();
}

RelativeEntropy relative_entropy(const DensityMatrix& r1, const DensityMatrix& r2) {
  require_same_dim(r1, r2);
  const EigenDecomposition e1 = hermitian_eigen(r1.matrix());
  const EigenDecomposition e2 = hermitian_eigen(r2.matrix());

  double self_term = 0.0;  // Tr[r1 ln r1], with 0 ln 0 = 0
  for (Index i = 0; i < e1.eigenvalues.size(); ++i) {
    const double p = e1.eigenvalues(i);
    if (p > tolerance::kSupport) self_term += p * std::log(p);
  }

  double cross_term = 0.0;  // Tr[r1 ln r2]
  for (Index j = 0; j < e2.eigenvalues.size(); ++j) {
    const ComplexVector v = e2.eigenvectors.col(j);
    const double weight = (v.adjoint() * r1.matrix() * v)(0, 0).real();
    const double q = e2.eigenvalues(j);
    if (q < tolerance::kSupport) {
      if (weight > tolerance::kSupport) {
        return {std::numeric_limits<double>::infinity(), true};
      }
      continue;
    }
    cross_term += weight * std::log(q);
  }
  return {std::max(0.0, self_term - cross_term), false};
}

}  // namespace infoflow
