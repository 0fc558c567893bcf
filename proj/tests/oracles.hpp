#pragma once

// Test-side reference computations. None of these call the library's
// eigensolver or matrix exponential.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "infoflow/qmath.hpp"

namespace oracle {

using infoflow::Complex;
using infoflow::ComplexMatrix;
using infoflow::Index;

// Roots of the characteristic polynomial of a 2x2 or 3x3 Hermitian matrix,
// ascending (trigonometric solution of the depressed cubic).
inline std::vector<double> hermitian_roots(const ComplexMatrix& m) {
  if (m.rows() == 1) return {m(0, 0).real()};
  if (m.rows() == 2) {
    const double p = m(0, 0).real(), r = m(1, 1).real();
    const double mid = 0.5 * (p + r);
    const double rad = std::hypot(0.5 * (p - r), std::abs(m(0, 1)));
    return {mid - rad, mid + rad};
  }
  const double c2 = m.trace().real();
  const double c1 = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                     m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                        .real();
  const double c0 = m.determinant().real();
  // x^3 - c2 x^2 + c1 x - c0 = 0, shift x = y + c2/3
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
  std::vector<double> roots(3, shift);
  if (p < 0.0) {
    const double a = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * a), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots[k] = shift + a * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline double trace_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (double r : hermitian_roots(m)) s += std::abs(r);
  return s;
}

inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) { return 0.5 * trace_norm(a - b); }

// Denman-Beavers iteration for the principal square root of a positive definite matrix.
inline ComplexMatrix sqrtm(const ComplexMatrix& a) {
  ComplexMatrix y = a;
  ComplexMatrix z = ComplexMatrix::Identity(a.rows(), a.cols());
  for (int k = 0; k < 100; ++k) {
    const ComplexMatrix yi = y.inverse();
    const ComplexMatrix zi = z.inverse();
    const ComplexMatrix yn = 0.5 * (y + zi);
    z = 0.5 * (z + yi);
    const double change = (yn - y).cwiseAbs().maxCoeff();
    y = yn;
    if (change < 1e-15) break;
  }
  return y;
}

// Scaling and squaring around a truncated Taylor series.
inline ComplexMatrix expm(const ComplexMatrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const ComplexMatrix x = a / std::pow(2.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline ComplexMatrix random_hermitian(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = Complex(n(rng), n(rng));
  return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix random_unitary(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

// Random state: Ginibre with a random rank between 1 and d.
inline ComplexMatrix random_state(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  const Index rank = std::uniform_int_distribution<Index>(1, d)(rng);
  ComplexMatrix g(d, rank);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < rank; ++j) g(i, j) = Complex(n(rng), n(rng));
  ComplexMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return rho / rho.trace().real();
}

inline ComplexMatrix bloch(double x, double y, double z) {
  ComplexMatrix m(2, 2);
  m << 0.5 * (1 + z), Complex(0.5 * x, -0.5 * y), Complex(0.5 * x, 0.5 * y), 0.5 * (1 - z);
  return m;
}

// Bloch vector of a qubit state.
inline Eigen::Vector3d bloch_vector(const ComplexMatrix& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

// Composite Simpson on [a, b] with n (even) intervals.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
