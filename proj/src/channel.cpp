#include "infoflow/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "infoflow/error.hpp"

namespace infoflow {
namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw Error(Errc::DimensionMismatch,
                std::string(what) + ": dimensions " + std::to_string(a) + " and " + std::to_string(b));
  }
}

double condition_number(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const RealVector& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (!(smallest > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

// Phi(to, 0) Phi(from, 0)^{-1} with known Phi(from, 0).
Superoperator propagate_between(const Superoperator& from_map, const Superoperator& to_map) {
  const double cond = condition_number(from_map.matrix());
  if (!(cond <= kSingularCondition)) {
    throw Error(Errc::SingularPropagator, "Phi(t,0) has condition number " + std::to_string(cond));
  }
  Eigen::FullPivLU<ComplexMatrix> lu(from_map.matrix());
  return Superoperator(from_map.dim(), to_map.matrix() * lu.inverse());
}

}  // namespace

ComplexVector vectorize(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Index dim) {
  if (v.size() != dim * dim) throw Error(Errc::DimensionMismatch, "vector length is not dim^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

Superoperator::Superoperator(Index dim, ComplexMatrix matrix) : dim_(dim), matrix_(std::move(matrix)) {
  if (dim <= 0 || matrix_.rows() != dim * dim || matrix_.cols() != dim * dim) {
    throw Error(Errc::DimensionMismatch, "superoperator of dim " + std::to_string(dim) + " needs a " +
                                             std::to_string(dim * dim) + "x" + std::to_string(dim * dim) +
                                             " matrix");
  }
  if (!matrix_.allFinite()) throw Error(Errc::NonFinite, "superoperator has NaN or Inf entries");
}

Superoperator Superoperator::identity(Index dim) {
  return Superoperator(dim, ComplexMatrix::Identity(dim * dim, dim * dim));
}

Superoperator Superoperator::sandwich(const ComplexMatrix& left, const ComplexMatrix& right) {
  require_same_dim(left.rows(), right.rows(), "sandwich");
  return Superoperator(left.rows(), kron(right.transpose(), left));
}

ComplexMatrix Superoperator::act(const ComplexMatrix& x) const {
  require_same_dim(x.rows(), dim_, "superoperator action");
  return unvectorize(matrix_ * vectorize(x), dim_);
}

Superoperator validated(Superoperator phi, double tol) {
  if (!is_trace_preserving(phi, tol)) {
    throw Error(Errc::InvalidOutputState, "map is not trace preserving");
  }
  const CpReport cp = is_completely_positive(phi, tol);
  if (!cp.completely_positive) {
    throw Error(Errc::InvalidOutputState,
                "map is not completely positive, min Choi eigenvalue " + std::to_string(cp.min_eigenvalue));
  }
  phi.validated_ = true;
  return phi;
}

DensityMatrix apply(const Superoperator& phi, const DensityMatrix& rho) {
  require_same_dim(phi.dim(), rho.dim(), "apply");
  const ComplexMatrix out = hermitian_part(phi.act(rho.matrix()));
  try {
    return validate_density(out);
  } catch (const Error& e) {
    throw Error(Errc::InvalidOutputState, std::string("map output is not a state (") + e.what() + ")");
  }
}

Superoperator compose(const Superoperator& later, const Superoperator& earlier) {
  require_same_dim(later.dim(), earlier.dim(), "compose");
  return Superoperator(later.dim(), later.matrix() * earlier.matrix());
}

ChoiMatrix choi_matrix(const Superoperator& phi) {
  const Index d = phi.dim();
  const ComplexMatrix& m = phi.matrix();
  ComplexMatrix c(d * d, d * d);
  // C[(a,i),(b,j)] = phi(|i><j|)_{ab}
  for (Index a = 0; a < d; ++a)
    for (Index i = 0; i < d; ++i)
      for (Index b = 0; b < d; ++b)
        for (Index j = 0; j < d; ++j) c(a * d + i, b * d + j) = m(a + b * d, i + j * d);
  return {d, hermitian_part(c)};
}

CpReport is_completely_positive(const Superoperator& phi, double tol) {
  const ChoiMatrix choi = choi_matrix(phi);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(choi.matrix, Eigen::EigenvaluesOnly);
  const double lowest = solver.eigenvalues()(0);
  return {lowest >= -tol, lowest};
}

bool is_trace_preserving(const Superoperator& phi, double tol) {
  const Index d = phi.dim();
  const ComplexMatrix& m = phi.matrix();
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      Complex trace = 0.0;
      for (Index a = 0; a < d; ++a) trace += m(a + a * d, i + j * d);
      const double expected = (i == j) ? 1.0 : 0.0;
      if (std::abs(trace - expected) > tol) return false;
    }
  }
  return true;
}

Superoperator generator_at(const GeneratorSpec& gen, double t) {
  const Index d = gen.dim;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const Complex minus_i(0.0, -1.0);
  ComplexMatrix k = ComplexMatrix::Zero(d * d, d * d);
  if (gen.hamiltonian) {
    const ComplexMatrix h = gen.hamiltonian(t);
    require_same_dim(h.rows(), d, "hamiltonian");
    k += minus_i * (kron(id, h) - kron(h.transpose(), id));
  }
  for (const LindbladTerm& term : gen.terms) {
    const double rate = term.rate(t);
    if (!std::isfinite(rate) || std::abs(rate) > 1e12) {
      throw Error(Errc::RateDivergence, "rate " + std::to_string(rate) + " at t = " + std::to_string(t));
    }
    const ComplexMatrix a = term.op(t);
    require_same_dim(a.rows(), d, "lindblad operator");
    const ComplexMatrix ada = a.adjoint() * a;
    k += rate * (kron(a.conjugate(), a) - 0.5 * kron(id, ada) - 0.5 * kron(ada.transpose(), id));
  }
  return Superoperator(d, std::move(k));
}

Superoperator MapFamily::at(double t) const {
  const double slack = 1e-12 * std::max(1.0, t_max);
  if (!(t >= -slack && t <= t_max + slack)) {
    throw Error(Errc::InvalidArgument,
                "time " + std::to_string(t) + " outside family domain [0, " + std::to_string(t_max) + "]");
  }
  return evaluator(std::clamp(t, 0.0, t_max));
}

MapFamily semigroup_family(const GeneratorSpec& gen, double t_max) {
  const ComplexMatrix l = generator_at(gen, 0.0).matrix();
  const Index d = gen.dim;
  return {d, t_max, [l, d](double t) { return Superoperator(d, (l * t).exp()); }};
}

Superoperator intermediate_map(const MapFamily& family, double t, double tau) {
  if (!(t >= 0.0) || !(tau > 0.0)) {
    throw Error(Errc::InvalidArgument, "intermediate_map needs t >= 0 and tau > 0");
  }
  return propagate_between(family.at(t), family.at(t + tau));
}

DivisibilityReport divisibility_scan(const MapFamily& family, const TimeGrid& grid, double tol) {
  DivisibilityReport report{{}, {}, true};
  report.intervals.reserve(grid.n_steps());
  Superoperator current = family.at(grid.time(0));
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    Superoperator next = family.at(grid.time(k + 1));
    IntervalVerdict verdict{grid.time(k), grid.time(k + 1), IntervalKind::CompletelyPositive,
                            std::numeric_limits<double>::quiet_NaN(), condition_number(current.matrix())};
    if (!(verdict.condition <= kSingularCondition)) {
      verdict.kind = IntervalKind::Singular;
    } else {
      Eigen::FullPivLU<ComplexMatrix> lu(current.matrix());
      const Superoperator step(family.dim, next.matrix() * lu.inverse());
      const CpReport cp = is_completely_positive(step, tol);
      verdict.min_choi_eigenvalue = cp.min_eigenvalue;
      if (!cp.completely_positive) verdict.kind = IntervalKind::NotCompletelyPositive;
    }
    if (verdict.kind != IntervalKind::CompletelyPositive) {
      report.violations.push_back(k);
      report.divisible = false;
    }
    report.intervals.push_back(verdict);
    current = std::move(next);
  }
  return report;
}

std::vector<ComplexMatrix> integrate_time_local(const GeneratorSpec& gen, const ComplexMatrix& rho0,
                                                double t_start, double t_end, std::size_t steps) {
  if (steps == 0) throw Error(Errc::InvalidArgument, "integrate_time_local needs at least one step");
  require_same_dim(rho0.rows(), gen.dim, "initial state");
  const double h = (t_end - t_start) / static_cast<double>(steps);
  std::vector<ComplexMatrix> out;
  out.reserve(steps + 1);
  ComplexVector y = vectorize(rho0);
  out.push_back(hermitian_part(rho0));

  ComplexMatrix k_begin = generator_at(gen, t_start).matrix();
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = t_start + h * static_cast<double>(n);
    const double t_next = (n + 1 == steps) ? t_end : t_start + h * static_cast<double>(n + 1);
    const ComplexMatrix k_mid = generator_at(gen, t + 0.5 * h).matrix();
    const ComplexMatrix k_end = generator_at(gen, t_next).matrix();
    const ComplexVector s1 = k_begin * y;
    const ComplexVector s2 = k_mid * (y + 0.5 * h * s1);
    const ComplexVector s3 = k_mid * (y + 0.5 * h * s2);
    const ComplexVector s4 = k_end * (y + h * s3);
    y += (h / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
    out.push_back(hermitian_part(unvectorize(y, gen.dim)));
    k_begin = k_end;
  }
  return out;
}

std::vector<ComplexMatrix> integrate_time_local(const GeneratorSpec& gen, const DensityMatrix& rho0,
                                                const TimeGrid& grid, std::size_t substeps) {
  if (substeps == 0) throw Error(Errc::InvalidArgument, "substeps must be positive");
  const std::vector<ComplexMatrix> fine =
      integrate_time_local(gen, rho0.matrix(), 0.0, grid.t_max(), grid.n_steps() * substeps);
  std::vector<ComplexMatrix> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out.push_back(fine[k * substeps]);
  return out;
}

Superoperator extract_generator(const MapFamily& family, double t, double h) {
  if (!(h > 0.0)) throw Error(Errc::InvalidArgument, "extract_generator needs h > 0");
  const Superoperator at_t = family.at(t);
  const ComplexMatrix id = ComplexMatrix::Identity(at_t.matrix().rows(), at_t.matrix().cols());
  auto step_to = [&](double target) { return propagate_between(at_t, family.at(target)).matrix(); };

  ComplexMatrix k;
  if (t - h >= 0.0 && t + h <= family.t_max) {
    k = (step_to(t + h) - step_to(t - h)) / (2.0 * h);
  } else if (t + 2.0 * h <= family.t_max) {
    k = (-3.0 * id + 4.0 * step_to(t + h) - step_to(t + 2.0 * h)) / (2.0 * h);
  } else {
    k = (3.0 * id - 4.0 * step_to(t - h) + step_to(t - 2.0 * h)) / (2.0 * h);
  }
  return Superoperator(family.dim, std::move(k));
}

}  // namespace infoflow
