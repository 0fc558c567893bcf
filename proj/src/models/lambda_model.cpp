#include "infoflow/models/lambda_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>

#include "infoflow/error.hpp"

namespace infoflow::models {
namespace {

constexpr std::size_t kGaussOrder = 16;

struct GaussRule {
  std::array<double, kGaussOrder> x;
  std::array<double, kGaussOrder> w;
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, kGaussOrder>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    GaussRule r{};
    for (std::size_t k = 0; k < kGaussOrder / 2; ++k) {
      r.x[2 * k] = -a[k];
      r.w[2 * k] = w[k];
      r.x[2 * k + 1] = a[k];
      r.w[2 * k + 1] = w[k];
    }
    return r;
  }();
  return rule;
}

// x = omega - omega_cav range of the finite-line integral.
struct Range {
  double lo;
  double hi;
};

Range detuning_range(const LambdaParams& p, const QuadratureConfig& q) {
  return {-p.omega_cav, q.omega_cutoff * p.lambda};
}

std::size_t panel_count(const Range& r, double phase_rate, const LambdaParams& p, const QuadratureConfig& q) {
  const double width = r.hi - r.lo;
  const double by_width = std::ceil(width / (q.max_panel_width * p.lambda));
  const double by_phase = std::ceil(width * std::abs(phase_rate) / q.max_panel_phase);
  return static_cast<std::size_t>(std::max({1.0, by_width, by_phase}));
}

// Calls fn(x, weight) on every node of the composite rule.
template <class Fn>
void for_each_node(const Range& r, std::size_t panels, Fn&& fn) {
  const GaussRule& rule = gauss_rule();
  const double width = (r.hi - r.lo) / static_cast<double>(panels);
  const double half = 0.5 * width;
  for (std::size_t n = 0; n < panels; ++n) {
    const double mid = r.lo + (static_cast<double>(n) + 0.5) * width;
    for (std::size_t k = 0; k < kGaussOrder; ++k) fn(mid + half * rule.x[k], half * rule.w[k]);
  }
}

double sinc(double u) {
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

// (1 - cos u) / u without cancellation.
double versinc(double u) {
  if (u == 0.0) return 0.0;
  const double s = std::sin(0.5 * u);
  return 2.0 * s * s / u;
}

double channel_detuning(const LambdaParams& p, int channel) {
  if (channel == 1) return p.delta1;
  if (channel == 2) return p.delta2;
  throw Error(Errc::InvalidArgument, "Lambda channel must be 1 or 2, got " + std::to_string(channel));
}

bool within(double a, double b, double scale, double tol) { return std::abs(a - b) <= tol * scale; }

// ---------------------------------------------------------------------------
// Reservoir kernel c(s) = int dx J(x) exp(i x s), so that the channel kernel is
// exp(-i Delta_i s) c(s). Samples of c/gamma0 on a uniform s-lattice are shared
// between families that differ only in gamma0 or the detunings.

struct KernelKey {
  double lambda, omega_cav, cutoff, panel_width, panel_phase;
  std::size_t panel_scale;
  double spacing;
  std::size_t count;
  auto tie() const { return std::tie(lambda, omega_cav, cutoff, panel_width, panel_phase, panel_scale, spacing, count); }
  bool operator<(const KernelKey& o) const { return tie() < o.tie(); }
};

Complex unit_kernel(const LambdaParams& p, const QuadratureConfig& q, std::size_t panel_scale, double s) {
  const Range r = detuning_range(p, q);
  const std::size_t panels = panel_count(r, s, p, q) * panel_scale;
  const double l2 = p.lambda * p.lambda;
  Complex sum = 0.0;
  for_each_node(r, panels, [&](double x, double w) { sum += std::polar(w * l2 / (x * x + l2), x * s); });
  return sum / (2.0 * std::numbers::pi);
}

class KernelCache {
 public:
  std::shared_ptr<const std::vector<Complex>> get(const KernelKey& key) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : it->second;
  }
  void put(const KernelKey& key, std::shared_ptr<const std::vector<Complex>> samples) {
    std::lock_guard lock(mutex_);
    if (entries_.size() >= 32) entries_.clear();
    entries_.emplace(key, std::move(samples));
  }

 private:
  std::mutex mutex_;
  std::map<KernelKey, std::shared_ptr<const std::vector<Complex>>> entries_;
};

KernelCache& kernel_cache() {
  static KernelCache cache;
  return cache;
}

// c(j * spacing) / gamma0 for j = 0..count-1.
std::shared_ptr<const std::vector<Complex>> unit_kernel_samples(const LambdaParams& p, const QuadratureConfig& q,
                                                                 std::size_t panel_scale, double spacing,
                                                                 std::size_t count) {
  auto samples = std::make_shared<std::vector<Complex>>(count);
  if (q.extended_line) {
    // Lorentzian over the whole line: c(s) = (gamma0 lambda / 2) exp(-lambda |s|)
    for (std::size_t j = 0; j < count; ++j) {
      (*samples)[j] = 0.5 * p.lambda * std::exp(-p.lambda * spacing * static_cast<double>(j));
    }
    return samples;
  }
  const KernelKey key{p.lambda, p.omega_cav, q.omega_cutoff, q.max_panel_width, q.max_panel_phase,
                      panel_scale, spacing, count};
  if (auto hit = kernel_cache().get(key)) return hit;

  // A lattice of half the density supplies every even sample.
  const KernelKey coarse_key{p.lambda, p.omega_cav, q.omega_cutoff, q.max_panel_width, q.max_panel_phase,
                             panel_scale, 2.0 * spacing, (count + 1) / 2};
  const auto coarse = (count % 2 == 1) ? kernel_cache().get(coarse_key) : nullptr;
  for (std::size_t j = 0; j < count; ++j) {
    if (coarse && j % 2 == 0) {
      (*samples)[j] = (*coarse)[j / 2];
    } else {
      (*samples)[j] = unit_kernel(p, q, panel_scale, spacing * static_cast<double>(j));
    }
  }
  kernel_cache().put(key, samples);
  return samples;
}

// Smallest panel multiplier for which one more doubling changes c(s) by less
// than rel_tol * c(0) across the s-range.
std::size_t kernel_panel_scale(const LambdaParams& p, const QuadratureConfig& q, double s_max) {
  if (q.extended_line) return 1;
  const double scale = std::abs(unit_kernel(p, q, 1, 0.0));
  std::size_t panel_scale = 1;
  for (int level = 0; level <= q.max_doublings; ++level) {
    bool converged = true;
    for (double s : {s_max, 0.5 * s_max, 0.25 * s_max}) {
      const Complex coarse = unit_kernel(p, q, panel_scale, s);
      const Complex fine = unit_kernel(p, q, 2 * panel_scale, s);
      if (std::abs(coarse - fine) > q.rel_tol * scale) converged = false;
    }
    if (converged) return panel_scale;
    panel_scale *= 2;
  }
  throw Error(Errc::QuadratureNotConverged, "reservoir kernel did not converge under panel doubling");
}

// ---------------------------------------------------------------------------
// RK4 over the s-grid. State layout:
enum Slot { kGamma1, kGamma2, kShift1, kShift2, kD1, kD2, kL1, kL2, kG1, kG2, kPop, kSlots };
using State = std::array<double, kSlots>;

State derivative(const State& y, Complex k1, Complex k2) {
  State d{};
  d[kGamma1] = k1.real();
  d[kGamma2] = k2.real();
  d[kShift1] = k1.imag();
  d[kShift2] = k2.imag();
  d[kD1] = y[kGamma1];
  d[kD2] = y[kGamma2];
  d[kL1] = y[kShift1];
  d[kL2] = y[kShift2];
  d[kG1] = y[kGamma1] * y[kPop];
  d[kG2] = y[kGamma2] * y[kPop];
  d[kPop] = -(y[kGamma1] + y[kGamma2]) * y[kPop];
  return d;
}

State axpy(const State& y, double h, const State& d) {
  State out;
  for (int i = 0; i < kSlots; ++i) out[i] = y[i] + h * d[i];
  return out;
}

struct Integration {
  std::vector<State> states;                 // at coarse grid nodes
  std::vector<std::array<Complex, 2>> kernel;  // channel kernels at coarse grid nodes
};

Integration integrate_rates(const LambdaParams& p, const QuadratureConfig& q, std::size_t panel_scale,
                            const TimeGrid& grid, std::size_t substeps) {
  const std::size_t steps = grid.n_steps() * substeps;
  const double h = grid.t_max() / static_cast<double>(steps);
  const double spacing = 0.5 * h;
  const auto unit = unit_kernel_samples(p, q, panel_scale, spacing, 2 * steps + 1);
  auto channel_kernel = [&](std::size_t j) {
    const double s = spacing * static_cast<double>(j);
    const Complex c = p.gamma0 * (*unit)[j];
    return std::array<Complex, 2>{std::polar(1.0, -p.delta1 * s) * c, std::polar(1.0, -p.delta2 * s) * c};
  };

  Integration out;
  out.states.reserve(grid.size());
  out.kernel.reserve(grid.size());
  State y{};
  y[kPop] = 1.0;
  out.states.push_back(y);
  out.kernel.push_back(channel_kernel(0));
  for (std::size_t n = 0; n < steps; ++n) {
    const auto k_begin = channel_kernel(2 * n);
    const auto k_mid = channel_kernel(2 * n + 1);
    const auto k_end = channel_kernel(2 * n + 2);
    const State s1 = derivative(y, k_begin[0], k_begin[1]);
    const State s2 = derivative(axpy(y, 0.5 * h, s1), k_mid[0], k_mid[1]);
    const State s3 = derivative(axpy(y, 0.5 * h, s2), k_mid[0], k_mid[1]);
    const State s4 = derivative(axpy(y, h, s3), k_end[0], k_end[1]);
    for (int i = 0; i < kSlots; ++i) y[i] += (h / 6.0) * (s1[i] + 2.0 * s2[i] + 2.0 * s3[i] + s4[i]);
    if ((n + 1) % substeps == 0) {
      out.states.push_back(y);
      out.kernel.push_back(k_end);
    }
  }
  return out;
}

bool integrations_agree(const Integration& coarse, const Integration& fine, double rel_tol) {
  double scale = 0.0;
  for (const State& y : fine.states)
    for (int i = 0; i < kPop; ++i) scale = std::max(scale, std::abs(y[i]));
  scale = std::max(scale, 1e-300);
  for (std::size_t k = 0; k < fine.states.size(); ++k) {
    for (int i = 0; i < kSlots; ++i) {
      if (!within(coarse.states[k][i], fine.states[k][i], scale, rel_tol)) return false;
    }
  }
  return true;
}

// Cubic Hermite on [0, 1] in the local coordinate u, interval length h.
double hermite(double y0, double d0, double y1, double d1, double h, double u) {
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * d1;
}

}  // namespace

void validate(const LambdaParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(Errc::InvalidArgument, std::string("Lambda ") + name + " must be positive, got " + std::to_string(v));
    }
  };
  positive(p.gamma0, "gamma0");
  positive(p.lambda, "lambda");
  positive(p.omega_cav, "omega_cav");
  if (!std::isfinite(p.delta1) || !std::isfinite(p.delta2)) {
    throw Error(Errc::InvalidArgument, "Lambda detunings must be finite");
  }
}

void validate(const QuadratureConfig& q) {
  if (!(q.omega_cutoff > 0.0) || !(q.max_panel_width > 0.0) || !(q.max_panel_phase > 0.0) || !(q.s_step > 0.0) ||
      !(q.rel_tol > 0.0) || q.max_doublings < 0) {
    throw Error(Errc::InvalidArgument, "quadrature settings must be positive");
  }
}

double lambda_spectral_density(const LambdaParams& p, double x) {
  const double l2 = p.lambda * p.lambda;
  return p.gamma0 / (2.0 * std::numbers::pi) * l2 / (x * x + l2);
}

LambdaRates lambda_rates(const LambdaParams& p, double t, const QuadratureConfig& quad) {
  validate(p);
  validate(quad);
  if (!(t >= 0.0)) throw Error(Errc::InvalidArgument, "lambda_rates needs t >= 0");
  if (t == 0.0) return {0.0, 0.0, 0.0, 0.0};

  if (quad.extended_line) {
    auto closed = [&](double delta, double& gamma, double& shift) {
      const double l = p.lambda;
      const double pref = 0.5 * p.gamma0 * l / (l * l + delta * delta);
      const double decay = std::exp(-l * t);
      const double s = std::sin(delta * t);
      const double c = std::cos(delta * t);
      gamma = pref * (l + decay * (delta * s - l * c));
      shift = -pref * (delta - decay * (l * s + delta * c));
    };
    LambdaRates r{};
    closed(p.delta1, r.gamma1, r.shift1);
    closed(p.delta2, r.gamma2, r.shift2);
    return r;
  }

  const Range range = detuning_range(p, quad);
  auto evaluate = [&](std::size_t panels) {
    LambdaRates r{};
    for_each_node(range, panels, [&](double x, double w) {
      const double wj = w * t * lambda_spectral_density(p, x);
      const double u1 = (x - p.delta1) * t;
      const double u2 = (x - p.delta2) * t;
      r.gamma1 += wj * sinc(u1);
      r.gamma2 += wj * sinc(u2);
      r.shift1 += wj * versinc(u1);
      r.shift2 += wj * versinc(u2);
    });
    return r;
  };
  auto agree = [&](const LambdaRates& a, const LambdaRates& b) {
    const double scale = std::max({std::abs(b.gamma1), std::abs(b.gamma2), std::abs(b.shift1), std::abs(b.shift2),
                                   1e-12 * p.gamma0 * p.lambda});
    return within(a.gamma1, b.gamma1, scale, quad.rel_tol) && within(a.gamma2, b.gamma2, scale, quad.rel_tol) &&
           within(a.shift1, b.shift1, scale, quad.rel_tol) && within(a.shift2, b.shift2, scale, quad.rel_tol);
  };

  std::size_t panels = panel_count(range, t, p, quad);
  LambdaRates previous = evaluate(panels);
  for (int level = 0; level < quad.max_doublings; ++level) {
    panels *= 2;
    const LambdaRates next = evaluate(panels);
    if (agree(previous, next)) return next;
    previous = next;
  }
  throw Error(Errc::QuadratureNotConverged, "Lambda rates at t = " + std::to_string(t));
}

double lambda_rate_limit_extended(const LambdaParams& p, int channel) {
  const double delta = channel_detuning(p, channel);
  return p.gamma0 * p.lambda * p.lambda / (2.0 * (delta * delta + p.lambda * p.lambda));
}

Superoperator lambda_map(Complex f, double g1, double g2) {
  ComplexMatrix m = ComplexMatrix::Zero(9, 9);
  // column-stacked index of rho(i, j) is i + 3 j
  m(0, 0) = std::norm(f);
  m(4, 0) = g1;
  m(8, 0) = g2;
  m(4, 4) = 1.0;
  m(8, 8) = 1.0;
  m(3, 3) = f;             // rho_ab
  m(6, 6) = f;             // rho_ac
  m(1, 1) = std::conj(f);  // rho_ba
  m(2, 2) = std::conj(f);  // rho_ca
  m(7, 7) = 1.0;           // rho_bc
  m(5, 5) = 1.0;           // rho_cb
  return Superoperator(3, std::move(m));
}

LambdaTrajectory::LambdaTrajectory(const LambdaParams& p, const QuadratureConfig& quad, const TimeGrid& grid)
    : params_(p), grid_(grid) {
  validate(p);
  validate(quad);
  const std::size_t panel_scale = kernel_panel_scale(p, quad, grid.t_max());

  Integration coarse = integrate_rates(p, quad, panel_scale, grid, 1);
  bool converged = false;
  for (int level = 1; level <= quad.max_doublings; ++level) {
    Integration fine = integrate_rates(p, quad, panel_scale, grid, std::size_t{1} << level);
    converged = integrations_agree(coarse, fine, quad.rel_tol);
    coarse = std::move(fine);
    substeps_ = std::size_t{1} << level;
    if (converged) break;
  }
  if (!converged) {
    throw Error(Errc::QuadratureNotConverged, "Lambda s-integration did not converge under step doubling");
  }

  nodes_.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const State& y = coarse.states[k];
    Node n{};
    for (int i = 0; i < 2; ++i) {
      n.gamma[i] = y[kGamma1 + i];
      n.shift[i] = y[kShift1 + i];
      n.dgamma[i] = coarse.kernel[k][i].real();
      n.dshift[i] = coarse.kernel[k][i].imag();
      n.D[i] = y[kD1 + i];
      n.L[i] = y[kL1 + i];
      n.g[i] = y[kG1 + i];
    }
    n.pop = y[kPop];
    nodes_.push_back(n);
  }
}

LambdaTrajectory::Node LambdaTrajectory::interpolate(double t) const {
  const double tc = std::clamp(t, 0.0, grid_.t_max());
  const double h = grid_.step();
  std::size_t k = std::min(static_cast<std::size_t>(tc / h), grid_.n_steps() - 1);
  const double u = (tc - grid_.time(k)) / h;
  const Node& a = nodes_[k];
  if (u == 0.0) return a;
  const Node& b = nodes_[k + 1];
  Node out{};
  for (int i = 0; i < 2; ++i) {
    out.gamma[i] = hermite(a.gamma[i], a.dgamma[i], b.gamma[i], b.dgamma[i], h, u);
    out.shift[i] = hermite(a.shift[i], a.dshift[i], b.shift[i], b.dshift[i], h, u);
    out.D[i] = hermite(a.D[i], a.gamma[i], b.D[i], b.gamma[i], h, u);
    out.L[i] = hermite(a.L[i], a.shift[i], b.L[i], b.shift[i], h, u);
    out.g[i] = hermite(a.g[i], a.gamma[i] * a.pop, b.g[i], b.gamma[i] * b.pop, h, u);
  }
  out.pop = hermite(a.pop, -(a.gamma[0] + a.gamma[1]) * a.pop, b.pop, -(b.gamma[0] + b.gamma[1]) * b.pop, h, u);
  // The interpolated pieces keep pop + g1 + g2 = 1 only to interpolation error; restore it.
  out.pop = 1.0 - out.g[0] - out.g[1];
  return out;
}

LambdaSolution LambdaTrajectory::solution(double t) const {
  const Node n = interpolate(t);
  const Complex f = std::sqrt(std::max(n.pop, 0.0)) * std::polar(1.0, -(n.L[0] + n.L[1]));
  return {f, n.g[0], n.g[1], n.D[0], n.D[1], n.L[0], n.L[1]};
}

LambdaRates LambdaTrajectory::rates(double t) const {
  const Node n = interpolate(t);
  return {n.gamma[0], n.gamma[1], n.shift[0], n.shift[1]};
}

double LambdaTrajectory::excited_population(double t) const { return interpolate(t).pop; }

Superoperator LambdaTrajectory::map(double t) const {
  const LambdaSolution s = solution(t);
  return lambda_map(s.f, s.g1, s.g2);
}

LambdaSolution lambda_solution(const LambdaParams& p, double t, const QuadratureConfig& quad) {
  validate(p);
  validate(quad);
  if (!(t >= 0.0)) throw Error(Errc::InvalidArgument, "lambda_solution needs t >= 0");
  if (t == 0.0) return {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const double h = quad.s_step / p.lambda;
  const auto steps = static_cast<std::size_t>(std::max(2.0, std::ceil(t / h)));
  return LambdaTrajectory(p, quad, TimeGrid(t, steps)).solution(t);
}

MapFamily lambda_family(const LambdaParams& p, const QuadratureConfig& quad, const TimeGrid& grid) {
  auto trajectory = std::make_shared<const LambdaTrajectory>(p, quad, grid);
  return {3, grid.t_max(), [trajectory](double t) { return trajectory->map(t); }};
}

double lambda_sigma(const LambdaParams& p, int channel, double t, const QuadratureConfig& quad) {
  channel_detuning(p, channel);
  const LambdaRates r = lambda_rates(p, t, quad);
  const double gamma = channel == 1 ? r.gamma1 : r.gamma2;
  return -gamma * std::norm(lambda_solution(p, t, quad).f);
}

GeneratorSpec lambda_generator(const LambdaParams& p, const QuadratureConfig& quad) {
  validate(p);
  validate(quad);
  // generator_at asks for H and both rates at the same t; remember the last evaluation.
  struct Memo {
    std::mutex mutex;
    double t = -1.0;
    LambdaRates rates{};
  };
  auto memo = std::make_shared<Memo>();
  auto rates_at = [p, quad, memo](double t) {
    {
      std::lock_guard lock(memo->mutex);
      if (memo->t == t) return memo->rates;
    }
    const LambdaRates r = lambda_rates(p, t, quad);
    std::lock_guard lock(memo->mutex);
    memo->t = t;
    memo->rates = r;
    return r;
  };

  GeneratorSpec gen;
  gen.dim = 3;
  gen.hamiltonian = [rates_at](double t) {
    const LambdaRates r = rates_at(t);
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = r.shift1 + r.shift2;
    return h;
  };
  ComplexMatrix to_b = ComplexMatrix::Zero(3, 3);
  to_b(1, 0) = 1.0;
  ComplexMatrix to_c = ComplexMatrix::Zero(3, 3);
  to_c(2, 0) = 1.0;
  gen.terms.push_back({[to_b](double) { return to_b; }, [rates_at](double t) { return rates_at(t).gamma1; }});
  gen.terms.push_back({[to_c](double) { return to_c; }, [rates_at](double t) { return rates_at(t).gamma2; }});
  return gen;
}

}  // namespace infoflow::models
