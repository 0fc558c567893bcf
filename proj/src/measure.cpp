#include "infoflow/measure.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "infoflow/error.hpp"

namespace infoflow {
namespace {

void check_pair(const StatePair& pair, Index dim) {
  if (pair.rho1.dim() != dim || pair.rho2.dim() != dim) {
    throw Error(Errc::DimensionMismatch, "state pair dimension does not match the map family");
  }
}

DistanceTrajectory finish_trajectory(const TimeGrid& grid, std::vector<double> d) {
  std::vector<double> sigma = central_differences(d, grid.step());
  return {grid, std::move(d), std::move(sigma)};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ComplexMatrix complex_normals(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

bool pair_is_pure(double fraction, std::uint64_t index) {
  const double i = static_cast<double>(index);
  return std::floor((i + 1.0) * fraction) > std::floor(i * fraction);
}

}  // namespace

GridMaps::GridMaps(const MapFamily& family, const TimeGrid& grid, double tol) : grid_(grid), dim_(family.dim) {
  maps_.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    try {
      maps_.push_back(validated(family.at(grid.time(k)), tol));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (map at t = " + std::to_string(grid.time(k)) + ")");
    }
  }
}

std::vector<double> central_differences(const std::vector<double>& values, double step) {
  const std::size_t n = values.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  out[0] = (values[1] - values[0]) / step;
  out[n - 1] = (values[n - 1] - values[n - 2]) / step;
  for (std::size_t k = 1; k + 1 < n; ++k) out[k] = (values[k + 1] - values[k - 1]) / (2.0 * step);
  return out;
}

DistanceTrajectory distance_trajectory(const MapFamily& family, const StatePair& pair, const TimeGrid& grid) {
  check_pair(pair, family.dim);
  std::vector<double> d(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Superoperator phi = family.at(grid.time(k));
    d[k] = trace_distance(apply(phi, pair.rho1), apply(phi, pair.rho2));
  }
  return finish_trajectory(grid, std::move(d));
}

DistanceTrajectory distance_trajectory(const GridMaps& maps, const StatePair& pair) {
  check_pair(pair, maps.dim());
  const ComplexMatrix diff = pair.rho1.matrix() - pair.rho2.matrix();
  std::vector<double> d(maps.grid().size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = std::min(1.0, 0.5 * trace_norm(hermitian_part(maps.at(k).act(diff))));
  }
  return finish_trajectory(maps.grid(), std::move(d));
}

std::vector<GrowthInterval> growth_intervals(const DistanceTrajectory& traj, double eps) {
  if (!(eps >= 0.0)) throw Error(Errc::InvalidArgument, "growth threshold must be >= 0");
  const auto& d = traj.d_values;
  std::vector<GrowthInterval> out;
  if (d.size() < 2) return out;
  const std::size_t n = d.size() - 1;  // number of increments
  auto inc = [&](std::size_t k) { return d[k + 1] - d[k]; };

  std::size_t k = 0;
  while (k < n) {
    if (!(inc(k) > eps)) {
      ++k;
      continue;
    }
    const std::size_t begin = k;
    std::size_t end = k;  // last growing increment
    std::size_t j = k + 1;
    while (j < n) {
      if (inc(j) > eps) {
        end = j;
        ++j;
      } else if (std::abs(inc(j)) <= eps && j + 1 < n && inc(j + 1) > eps) {
        j += 1;
      } else {
        break;
      }
    }
    const double contribution = d[end + 1] - d[begin];
    if (contribution > 0.0) {
      out.push_back({traj.grid.time(begin), traj.grid.time(end + 1), contribution, begin, end + 1});
    }
    k = end + 1;
  }
  return out;
}

MeasureResult measure_for_pair(const DistanceTrajectory& traj, const StatePair& pair, double eps) {
  MeasureResult r{0.0, pair, {}, 1, 0, true, {}, std::nullopt};
  r.intervals = growth_intervals(traj, eps);
  const double tail_start = (1.0 - kTailFraction) * traj.grid.t_max();
  for (const GrowthInterval& gi : r.intervals) {
    r.value += gi.contribution;
    if (gi.b > tail_start && gi.contribution > kTailContribution) r.converged = false;
  }
  return r;
}

MeasureResult measure_for_pair(const MapFamily& family, const StatePair& pair, const TimeGrid& grid, double eps) {
  return measure_for_pair(distance_trajectory(family, pair, grid), pair, eps);
}

MeasureResult measure_for_pair(const GridMaps& maps, const StatePair& pair, double eps) {
  return measure_for_pair(distance_trajectory(maps, pair), pair, eps);
}

DensityMatrix sample_pure_state(Index dim, Rng& rng) {
  if (dim < 1) throw Error(Errc::InvalidArgument, "dimension must be positive");
  return pure_state(complex_normals(dim, 1, rng).col(0));
}

DensityMatrix sample_mixed_state(Index dim, Rng& rng) {
  if (dim < 1) throw Error(Errc::InvalidArgument, "dimension must be positive");
  const ComplexMatrix g = complex_normals(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho = hermitian_part(rho);
  rho /= rho.trace().real();
  return validate_density(rho);
}

void validate(const SamplerConfig& s) {
  if (!(s.pure_fraction >= 0.0 && s.pure_fraction <= 1.0)) {
    throw Error(Errc::InvalidArgument, "sampler pure_fraction must lie in [0, 1]");
  }
  if (s.threads < 1) throw Error(Errc::InvalidArgument, "sampler needs at least one thread");
  if (!(s.eps >= 0.0)) throw Error(Errc::InvalidArgument, "growth threshold must be >= 0");
  if (s.n_pairs == 0 && s.candidates.empty()) {
    throw Error(Errc::InvalidArgument, "nothing to maximize over: no samples and no candidates");
  }
}

Rng pair_rng(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix64(splitmix64(seed) ^ index)); }

StatePair sample_pair(Index dim, const SamplerConfig& s, std::uint64_t index) {
  Rng rng = pair_rng(s.seed, index);
  if (pair_is_pure(s.pure_fraction, index)) {
    DensityMatrix r1 = sample_pure_state(dim, rng);
    DensityMatrix r2 = sample_pure_state(dim, rng);
    return {std::move(r1), std::move(r2)};
  }
  DensityMatrix r1 = sample_mixed_state(dim, rng);
  DensityMatrix r2 = sample_mixed_state(dim, rng);
  return {std::move(r1), std::move(r2)};
}

MeasureResult maximize_measure(const MapFamily& family, const TimeGrid& grid, const SamplerConfig& sampler) {
  validate(sampler);
  return maximize_measure(GridMaps(family, grid), sampler);
}

MeasureResult maximize_measure(const GridMaps& maps, const SamplerConfig& sampler) {
  validate(sampler);
  for (const StatePair& c : sampler.candidates) check_pair(c, maps.dim());
  const std::size_t n_cand = sampler.candidates.size();
  const std::size_t total = n_cand + sampler.n_pairs;

  auto pair_for = [&](std::size_t i) {
    return i < n_cand ? sampler.candidates[i] : sample_pair(maps.dim(), sampler, i - n_cand);
  };

  std::vector<double> values(total, 0.0);
  std::vector<std::exception_ptr> errors(total);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        values[i] = measure_for_pair(maps, pair_for(i), sampler.eps).value;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t n_threads = std::min(sampler.threads, std::max<std::size_t>(total, 1));
  if (n_threads <= 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      const std::size_t begin = std::min(total, t * chunk);
      const std::size_t end = std::min(total, begin + chunk);
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < total; ++i) {
    if (values[i] > values[best]) best = i;
  }
  MeasureResult r = measure_for_pair(maps, pair_for(best), sampler.eps);
  r.samples_evaluated = total;
  r.seed = sampler.seed;
  r.candidate_values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n_cand));
  if (best < n_cand) r.best_candidate = best;
  return r;
}

}  // namespace infoflow
