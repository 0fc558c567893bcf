#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "infoflow/error.hpp"
#include "infoflow/qmath.hpp"
#include "oracles.hpp"

using namespace infoflow;

namespace {

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an infoflow::Error");
  return Errc::InvalidArgument;
}

ComplexMatrix diag(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(v.size()), static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

}  // namespace

TEST_CASE("hermitian_eigen on diagonal and Pauli-x input") {
  auto e = hermitian_eigen(diag({3, 1}));
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(3.0));

  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  e = hermitian_eigen(x);
  CHECK(e.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eigen matches characteristic-polynomial roots on random 3x3 input") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix m = oracle::random_hermitian(3, rng);
    const auto e = hermitian_eigen(m);
    const auto roots = oracle::hermitian_roots(m);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(e.eigenvalues(k) - roots[k]) < 1e-10);
    const ComplexMatrix v = e.eigenvectors;
    CHECK(oracle::max_abs(v.adjoint() * v - ComplexMatrix::Identity(3, 3)) < 1e-12);
    CHECK(oracle::max_abs(m - v * e.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint()) < 1e-10);
  }
}

TEST_CASE("hermitian_eigen rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 1, 2, 0, 1;
  CHECK(error_code([&] { hermitian_eigen(m); }) == Errc::NonHermitian);
}

TEST_CASE("operator_abs") {
  CHECK(oracle::max_abs(operator_abs(diag({1, -2})) - diag({1, 2})) < 1e-14);
  CHECK(oracle::max_abs(operator_abs(ComplexMatrix::Zero(3, 3))) == 0.0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + trial % 2;
    const ComplexMatrix a = oracle::random_hermitian(d, rng);
    const ComplexMatrix abs_a = operator_abs(a);
    CHECK(oracle::max_abs(abs_a - oracle::sqrtm(a * a)) < 1e-9);
    CHECK(oracle::max_abs(abs_a * abs_a - a.adjoint() * a) < 1e-10);
    CHECK(oracle::hermitian_roots(abs_a).front() > -1e-12);
  }
}

TEST_CASE("trace_distance examples") {
  const DensityMatrix up = basis_state(2, 0);
  const DensityMatrix down = basis_state(2, 1);
  CHECK(trace_distance(up, up) == 0.0);
  CHECK(trace_distance(up, down) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(trace_distance(validate_density(oracle::bloch(0, 0, 1)), maximally_mixed(2)) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(error_code([&] { trace_distance(up, basis_state(3, 0)); }) == Errc::DimensionMismatch);
}

TEST_CASE("trace_distance metric axioms and the 3x3 root oracle") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const Index d = 2 + trial % 2;
    const ComplexMatrix a = oracle::random_state(d, rng);
    const ComplexMatrix b = oracle::random_state(d, rng);
    const ComplexMatrix c = oracle::random_state(d, rng);
    const auto ra = validate_density(a), rb = validate_density(b), rc = validate_density(c);
    const double dab = trace_distance(ra, rb);
    CHECK(std::abs(dab - trace_distance(rb, ra)) <= 1e-14);
    CHECK(dab >= 0.0);
    CHECK(dab <= 1.0 + 1e-12);
    CHECK(trace_distance(ra, rc) <= dab + trace_distance(rb, rc) + 1e-12);
    CHECK(std::abs(dab - oracle::trace_distance(a, b)) < 1e-12);
  }
}

TEST_CASE("unitary invariance") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = 2 + trial % 2;
    const ComplexMatrix u = oracle::random_unitary(d, rng);
    const ComplexMatrix a = oracle::random_state(d, rng);
    const ComplexMatrix b = oracle::random_state(d, rng);
    const double before = trace_distance(validate_density(a), validate_density(b));
    const double after =
        trace_distance(validate_density(u * a * u.adjoint()), validate_density(u * b * u.adjoint()));
    CHECK(std::abs(before - after) <= 1e-12);
  }
}

TEST_CASE("distinguishability_probability") {
  const DensityMatrix up = basis_state(2, 0);
  CHECK(distinguishability_probability(up, up) == 0.5);
  CHECK(distinguishability_probability(up, basis_state(2, 1)) == doctest::Approx(1.0));
  CHECK(distinguishability_probability(validate_density(oracle::bloch(0, 0, 1)), maximally_mixed(2)) ==
        doctest::Approx(0.75));
}

TEST_CASE("hilbert_schmidt_distance") {
  const DensityMatrix up = basis_state(2, 0);
  CHECK(hilbert_schmidt_distance(up, up) == 0.0);
  CHECK(hilbert_schmidt_distance(up, basis_state(2, 1)) == doctest::Approx(std::numbers::sqrt2));
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = validate_density(oracle::random_state(2, rng));
    const auto b = validate_density(oracle::random_state(2, rng));
    CHECK(std::abs(hilbert_schmidt_distance(a, b) - std::numbers::sqrt2 * trace_distance(a, b)) <= 1e-12);
    // D = |r1 - r2| / 2 for Bloch vectors
    const double bloch = 0.5 * (oracle::bloch_vector(a.matrix()) - oracle::bloch_vector(b.matrix())).norm();
    CHECK(std::abs(trace_distance(a, b) - bloch) <= 1e-12);
  }
}

TEST_CASE("relative_entropy") {
  const DensityMatrix mixed = maximally_mixed(2);
  CHECK(relative_entropy(mixed, mixed).nats == doctest::Approx(0.0));
  CHECK_FALSE(relative_entropy(mixed, mixed).unbounded);

  const auto inf = relative_entropy(basis_state(2, 0), basis_state(2, 1));
  CHECK(inf.unbounded);
  CHECK(std::isinf(inf.nats));

  CHECK(relative_entropy(basis_state(2, 0), mixed).nats == doctest::Approx(std::numbers::ln2).epsilon(1e-14));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = validate_density(oracle::random_state(3, rng));
    const auto b = validate_density(oracle::random_state(3, rng));
    const auto s = relative_entropy(a, b);
    if (!s.unbounded) CHECK(s.nats >= 0.0);
  }
}

TEST_CASE("validate_density") {
  CHECK_NOTHROW(validate_density(0.5 * ComplexMatrix::Identity(2, 2)));
  CHECK(error_code([] { validate_density(diag({1.5, -0.5})); }) == Errc::NegativeEigenvalue);
  CHECK(error_code([] { validate_density(diag({0.6, 0.6})); }) == Errc::TraceNotOne);
  ComplexMatrix skew(2, 2);
  skew << 0.5, 0.1, 0.3, 0.5;
  CHECK(error_code([&] { validate_density(skew); }) == Errc::NonHermitian);
  ComplexMatrix nan = diag({0.5, 0.5});
  nan(0, 1) = std::nan("");
  CHECK(error_code([&] { validate_density(nan); }) == Errc::NonFinite);
  CHECK(error_code([] { validate_density(ComplexMatrix::Zero(2, 3)); }) == Errc::DimensionMismatch);
}

TEST_CASE("state constructors") {
  ComplexVector psi(2);
  psi << Complex(1, 1), Complex(0, 2);
  const DensityMatrix p = pure_state(psi);
  CHECK(std::abs(p.matrix().trace() - 1.0) < 1e-15);
  CHECK(oracle::hermitian_roots(p.matrix()).front() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(oracle::max_abs(maximally_mixed(3).matrix() - ComplexMatrix::Identity(3, 3) / 3.0) == 0.0);
  CHECK(basis_state(3, 2)(2, 2) == Complex(1.0));
}
