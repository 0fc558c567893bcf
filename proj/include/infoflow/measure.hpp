#pragma once

// Trace-distance trajectories and the information-flow measure
//   N = max over pairs of sum_i [D(b_i) - D(a_i)]
// over the intervals (a_i, b_i) in which D grows.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "infoflow/channel.hpp"

namespace infoflow {

inline constexpr double kDefaultGrowthEps = 1e-12;
// A growth interval this large near the end of the window means the
// recurrences are not dying out.
inline constexpr double kTailContribution = 1e-6;
inline constexpr double kTailFraction = 0.2;

struct StatePair {
  DensityMatrix rho1;
  DensityMatrix rho2;
};

struct DistanceTrajectory {
  TimeGrid grid;
  std::vector<double> d_values;
  std::vector<double> sigma_values;  // central differences, one-sided at the ends
};

struct GrowthInterval {
  double a;
  double b;
  double contribution;  // D(b) - D(a)
  std::size_t k_begin;  // grid indices of a and b
  std::size_t k_end;
};

struct MeasureResult {
  double value = 0.0;
  StatePair pair;
  std::vector<GrowthInterval> intervals;
  std::size_t samples_evaluated = 0;  // candidates plus sampled pairs
  std::uint64_t seed = 0;
  bool converged = true;
  std::vector<double> candidate_values;  // maximize_measure only, in candidate order
  std::optional<std::size_t> best_candidate;  // set when a candidate attained the maximum
};

/// Phi(t_k, 0) for every grid time, each checked for TP and CP once.
class GridMaps {
 public:
  GridMaps(const MapFamily& family, const TimeGrid& grid, double tol = 1e-8);

  const TimeGrid& grid() const noexcept { return grid_; }
  Index dim() const noexcept { return dim_; }
  const Superoperator& at(std::size_t k) const { return maps_.at(k); }

 private:
  TimeGrid grid_;
  Index dim_;
  std::vector<Superoperator> maps_;
};

/// D(t_k) = trace_distance(apply(Phi(t_k), rho1), apply(Phi(t_k), rho2)).
DistanceTrajectory distance_trajectory(const MapFamily& family, const StatePair& pair, const TimeGrid& grid);

/// Same values from precomputed maps, using D = Tr|Phi(rho1 - rho2)| / 2.
DistanceTrajectory distance_trajectory(const GridMaps& maps, const StatePair& pair);

std::vector<double> central_differences(const std::vector<double>& values, double step);

/// Maximal runs of increments D_{k+1} - D_k > eps, bridged over single
/// increments with |dD| <= eps.
std::vector<GrowthInterval> growth_intervals(const DistanceTrajectory& traj, double eps = kDefaultGrowthEps);

MeasureResult measure_for_pair(const DistanceTrajectory& traj, const StatePair& pair, double eps = kDefaultGrowthEps);
MeasureResult measure_for_pair(const MapFamily& family, const StatePair& pair, const TimeGrid& grid,
                               double eps = kDefaultGrowthEps);
MeasureResult measure_for_pair(const GridMaps& maps, const StatePair& pair, double eps = kDefaultGrowthEps);

using Rng = std::mt19937_64;

/// Normalized vector of independent standard complex normals, as a projector.
DensityMatrix sample_pure_state(Index dim, Rng& rng);

/// G G^dagger / Tr(G G^dagger), G with independent standard complex normal entries.
DensityMatrix sample_mixed_state(Index dim, Rng& rng);

struct SamplerConfig {
  std::size_t n_pairs = 1000;
  double pure_fraction = 0.5;  // share of sampled pairs made of two pure states
  std::uint64_t seed = 20100106;
  std::size_t threads = 1;
  double eps = kDefaultGrowthEps;
  std::vector<StatePair> candidates;
};

void validate(const SamplerConfig& s);

/// Stream for sampled pair `index`, independent of evaluation order.
Rng pair_rng(std::uint64_t seed, std::uint64_t index);

/// Sampled pair `index`: both pure or both mixed, interleaved so that the
/// first n pairs contain round(n * pure_fraction) pure ones.
StatePair sample_pair(Index dim, const SamplerConfig& s, std::uint64_t index);

/// Candidates are evaluated first, then the sampled pairs; the lowest index wins ties.
MeasureResult maximize_measure(const MapFamily& family, const TimeGrid& grid, const SamplerConfig& sampler);
MeasureResult maximize_measure(const GridMaps& maps, const SamplerConfig& sampler);

}  // namespace infoflow
