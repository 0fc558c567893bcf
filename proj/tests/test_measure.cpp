#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "infoflow/error.hpp"
#include "infoflow/measure.hpp"
#include "infoflow/models/dephasing.hpp"
#include "infoflow/models/jc.hpp"
#include "oracles.hpp"

using namespace infoflow;
using namespace infoflow::models;

namespace {

DensityMatrix ground() { return basis_state(2, 1); }
DensityMatrix plus_x() { return validate_density(oracle::bloch(1, 0, 0)); }
DensityMatrix minus_x() { return validate_density(oracle::bloch(-1, 0, 0)); }

GeneratorSpec damping(double gamma) {
  GeneratorSpec g;
  g.dim = 2;
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(1, 0) = 1.0;
  g.terms.push_back({[a](double) { return a; }, [gamma](double) { return gamma; }});
  return g;
}

StatePair random_pair(Index dim, std::mt19937_64& rng) {
  return {validate_density(oracle::random_state(dim, rng)), validate_density(oracle::random_state(dim, rng))};
}

double sum_contributions(const MeasureResult& r) {
  double s = 0.0;
  for (const auto& iv : r.intervals) s += iv.contribution;
  return s;
}

}  // namespace

TEST_CASE("distance_trajectory examples") {
  const MapFamily jc = jc_family({5.0, 1.0}, 20.0);
  const TimeGrid grid(20.0, 2000);
  const auto same = distance_trajectory(jc, {plus_x(), plus_x()}, grid);
  for (double d : same.d_values) CHECK(d == 0.0);
  CHECK(growth_intervals(same).empty());

  std::mt19937_64 rng(43);
  const MapFamily weak = jc_family({0.3, 1.0}, 20.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto traj = distance_trajectory(weak, random_pair(2, rng), grid);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) CHECK(traj.d_values[k + 1] <= traj.d_values[k] + 1e-15);
  }

  const DephasingParams dp{1.0};
  const auto deph = distance_trajectory(dephasing_family(dp, 20.0), {plus_x(), minus_x()}, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(deph.d_values[k] - dephasing_coherence(dp, grid.time(k))) < 1e-12);
    CHECK(deph.d_values[k] >= 0.0);
    CHECK(deph.d_values[k] <= 1.0);
  }
}

TEST_CASE("GridMaps path agrees with the family path") {
  const MapFamily jc = jc_family({5.0, 1.0}, 20.0);
  const TimeGrid grid(20.0, 1000);
  const GridMaps maps(jc, grid);
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const StatePair p = random_pair(2, rng);
    const auto a = distance_trajectory(jc, p, grid);
    const auto b = distance_trajectory(maps, p);
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(a.d_values[k] - b.d_values[k]) < 1e-14);
  }
}

TEST_CASE("central_differences") {
  const auto d = central_differences({0.0, 1.0, 4.0, 9.0}, 1.0);
  REQUIRE(d.size() == 4);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 2.0);
  CHECK(d[2] == 4.0);
  CHECK(d[3] == 5.0);
}

TEST_CASE("growth_intervals") {
  const TimeGrid grid(4.0, 4);
  DistanceTrajectory mono{grid, {1.0, 0.8, 0.8, 0.5, 0.1}, {}};
  CHECK(growth_intervals(mono).empty());

  // a single flat increment inside a rising run is bridged
  DistanceTrajectory bridged{grid, {0.1, 0.2, 0.2, 0.3, 0.1}, {}};
  const auto iv = growth_intervals(bridged);
  REQUIRE(iv.size() == 1);
  CHECK(iv[0].a == 0.0);
  CHECK(iv[0].b == 3.0);
  CHECK(iv[0].contribution == doctest::Approx(0.2));

  // a real dip splits the run
  DistanceTrajectory split{grid, {0.1, 0.2, 0.15, 0.3, 0.1}, {}};
  CHECK(growth_intervals(split).size() == 2);

  // one period of the dephasing model starting at omega t = pi/2
  const DephasingParams dp{1.0};
  const TimeGrid period(std::numbers::pi, 800);
  const auto traj = distance_trajectory(dephasing_family(dp, std::numbers::pi), {plus_x(), minus_x()}, period);
  const auto one = growth_intervals(traj);
  REQUIRE(one.size() == 1);
  CHECK(one[0].a == doctest::Approx(0.5 * std::numbers::pi));
  CHECK(one[0].b == doctest::Approx(std::numbers::pi));
  CHECK(std::abs(one[0].contribution - 0.5) < 1e-12);
}

TEST_CASE("JC growth intervals follow the rising segments of |G|") {
  const JCParams p{5.0, 1.0};
  const TimeGrid grid(20.0, 4000);
  const auto traj = distance_trajectory(jc_family(p, 20.0), {ground(), plus_x()}, grid);
  const auto intervals = growth_intervals(traj);
  REQUIRE_FALSE(intervals.empty());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const bool rising = std::abs(jc_amplitude(p, grid.time(k + 1))) > std::abs(jc_amplitude(p, grid.time(k))) + 1e-12;
    if (!rising) continue;
    bool covered = false;
    for (const auto& iv : intervals) covered = covered || (iv.k_begin <= k + 1 && k <= iv.k_end + 1);
    CHECK(covered);
  }
  for (const auto& iv : intervals) {
    for (std::size_t k = iv.k_begin + 1; k + 1 < iv.k_end; ++k) {
      CHECK(std::abs(jc_amplitude(p, grid.time(k + 1))) >= std::abs(jc_amplitude(p, grid.time(k))) - 1e-12);
    }
  }
}

TEST_CASE("measure_for_pair examples and invariants") {
  const TimeGrid grid(20.0, 4000);

  const MapFamily semigroup = semigroup_family(damping(0.8), 20.0);
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(measure_for_pair(semigroup, random_pair(2, rng), grid).value == 0.0);
  }

  CHECK(measure_for_pair(jc_family({0.3, 1.0}, 20.0), {ground(), plus_x()}, grid).value == 0.0);

  const DephasingParams dp{1.0};
  const double window = 5.0 * std::numbers::pi;
  const auto deph = measure_for_pair(dephasing_family(dp, window), {plus_x(), minus_x()}, TimeGrid(window, 4000));
  CHECK(std::abs(deph.value - 2.5) < 1e-10);
  CHECK(deph.intervals.size() == 5);
  CHECK_FALSE(deph.converged);

  const MapFamily jc = jc_family({5.0, 1.0}, 20.0);
  const auto init = measure_for_pair(jc, {ground(), plus_x()}, grid);
  CHECK(init.value > 1e-4);
  // recurrences of size ~e^{-t/2} are still above the tail threshold at t = 20
  CHECK_FALSE(init.converged);
  CHECK(measure_for_pair(jc_family({5.0, 1.0}, 40.0), {ground(), plus_x()}, TimeGrid(40.0, 8000)).converged);

  for (int trial = 0; trial < 50; ++trial) {
    const StatePair p = random_pair(2, rng);
    const auto forward = measure_for_pair(jc, p, grid);
    const auto backward = measure_for_pair(jc, {p.rho2, p.rho1}, grid);
    CHECK(forward.value >= 0.0);
    CHECK((forward.value == 0.0) == forward.intervals.empty());
    CHECK(std::abs(forward.value - sum_contributions(forward)) <= 1e-12);
    CHECK(std::abs(forward.value - backward.value) <= 1e-14);
  }
}

TEST_CASE("divisible families give zero measure") {
  const TimeGrid grid(20.0, 1000);
  const MapFamily weak = jc_family({0.2, 1.0}, 20.0);
  REQUIRE(divisibility_scan(weak, grid).divisible);
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 100; ++trial) CHECK(measure_for_pair(weak, random_pair(2, rng), grid).value == 0.0);
}

TEST_CASE("refinement never loses more than 1e-6") {
  const MapFamily jc = jc_family({5.0, 1.0}, 20.0);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const StatePair p = trial == 0 ? StatePair{ground(), plus_x()} : random_pair(2, rng);
    double previous = measure_for_pair(jc, p, TimeGrid(20.0, 1000)).value;
    for (std::size_t n : {2000, 4000}) {
      const double v = measure_for_pair(jc, p, TimeGrid(20.0, n)).value;
      CHECK(v >= previous - 1e-6);
      previous = v;
    }
  }
}

TEST_CASE("sample_pure_state and sample_mixed_state") {
  Rng rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 2;
    const DensityMatrix pure = sample_pure_state(d, rng);
    CHECK(oracle::max_abs(pure.matrix() * pure.matrix() - pure.matrix()) <= 1e-12);
    const DensityMatrix mixed = sample_mixed_state(d, rng);
    CHECK(std::abs(mixed.matrix().trace() - 1.0) <= 1e-15);
    CHECK(oracle::hermitian_roots(mixed.matrix()).front() > 0.0);
  }
  Rng a(5), b(5);
  CHECK(sample_pure_state(3, a).matrix() == sample_pure_state(3, b).matrix());
  CHECK(sample_mixed_state(3, a).matrix() == sample_mixed_state(3, b).matrix());
}

TEST_CASE("sample_pair mix and determinism") {
  SamplerConfig s;
  std::size_t pure = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const StatePair p = sample_pair(2, s, i);
    const bool is_pure = oracle::hermitian_roots(p.rho1.matrix()).front() < 1e-12;
    CHECK(is_pure == (oracle::hermitian_roots(p.rho2.matrix()).front() < 1e-12));
    pure += is_pure;
  }
  CHECK(pure == 500);
  CHECK(sample_pair(3, s, 17).rho1.matrix() == sample_pair(3, s, 17).rho1.matrix());
  SamplerConfig other = s;
  other.seed = s.seed + 1;
  CHECK(sample_pair(2, s, 3).rho1.matrix() != sample_pair(2, other, 3).rho1.matrix());
}

TEST_CASE("maximize_measure") {
  const MapFamily jc = jc_family({5.0, 1.0}, 20.0);
  const TimeGrid grid(20.0, 2000);
  SamplerConfig s;
  s.n_pairs = 200;
  s.candidates = {{ground(), plus_x()}};

  const auto best = maximize_measure(jc, grid, s);
  CHECK(best.samples_evaluated == 201);
  CHECK(best.seed == s.seed);
  REQUIRE(best.candidate_values.size() == 1);
  const double candidate = measure_for_pair(jc, s.candidates[0], grid).value;
  CHECK(best.candidate_values[0] == candidate);
  CHECK(best.value >= candidate);
  for (std::uint64_t i = 0; i < 200; i += 7) {
    CHECK(best.value >= measure_for_pair(jc, sample_pair(2, s, i), grid).value);
  }
  CHECK(std::abs(best.value - sum_contributions(best)) <= 1e-12);
  CHECK(std::abs(best.value - measure_for_pair(jc, best.pair, grid).value) == 0.0);

  SamplerConfig threaded = s;
  threaded.threads = 3;
  const auto again = maximize_measure(jc, grid, threaded);
  CHECK(again.value == best.value);
  CHECK(again.pair.rho1.matrix() == best.pair.rho1.matrix());
  CHECK(again.best_candidate == best.best_candidate);

  // ties go to the lowest index: a duplicated candidate reports the first copy
  SamplerConfig dup;
  dup.n_pairs = 0;
  dup.candidates = {{ground(), plus_x()}, {ground(), plus_x()}};
  const auto tie = maximize_measure(jc, grid, dup);
  REQUIRE(tie.best_candidate.has_value());
  CHECK(*tie.best_candidate == 0);

  SamplerConfig semi;
  semi.n_pairs = 100;
  CHECK(maximize_measure(semigroup_family(damping(0.5), 20.0), grid, semi).value == 0.0);

  SamplerConfig bad;
  bad.n_pairs = 0;
  CHECK_THROWS_AS(maximize_measure(jc, grid, bad), Error);
  bad.n_pairs = 10;
  bad.pure_fraction = 1.5;
  CHECK_THROWS_AS(maximize_measure(jc, grid, bad), Error);
}
