#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "collideq/thermoprobe.hpp"

using namespace collideq;

namespace {

constexpr double kPi = std::numbers::pi;

RunSpec fig4_spec(double j_ee, InitialState init = {}) {
  RunSpec spec;
  spec.engine = Engine::cell;
  spec.model.omega_s = 3.0;
  spec.model.omega_e = 1.0;
  spec.model.j_se = kPi / 32.0;
  spec.model.j_ee = j_ee;
  spec.model.beta = 1.0;
  spec.env.beta0 = 1.0;
  spec.initial = init;
  return spec;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

// --- Landauer -----------------------------------------------------------------

TEST(Landauer, MarkovianRunRespectsBothBounds) {
  const LandauerSeries l = landauer_series(run_trajectory(fig4_spec(0.0), 100), 1.0);
  EXPECT_GE(min_of(l.gaps), -1e-10);
  EXPECT_GE(min_of(l.cumulative), -1e-10);
  EXPECT_TRUE(l.violations.empty());
  EXPECT_TRUE(l.cumulative_violations.empty());
}

TEST(Landauer, StrongEnvironmentCouplingViolatesInstantaneousBoundOnly) {
  for (double j_ee : {10.0 * kPi / 43.0, kPi / 4.0}) {
    const LandauerSeries l = landauer_series(run_trajectory(fig4_spec(j_ee), 100), 1.0);
    EXPECT_FALSE(l.violations.empty()) << j_ee;
    EXPECT_LT(min_of(l.gaps), -1e-6) << j_ee;
    EXPECT_GE(min_of(l.cumulative), -1e-10) << j_ee;
  }
}

TEST(Landauer, CumulativeGapIsRunningSumOfGaps) {
  for (double j_ee : {0.0, 0.3, kPi / 4.0}) {
    const Trajectory t = run_trajectory(fig4_spec(j_ee), 100);
    const LandauerSeries l = landauer_series(t, 1.0);
    double running = 0.0;
    for (std::size_t k = 0; k < l.gaps.size(); ++k) {
      running += l.gaps[k];
      EXPECT_NEAR(l.cumulative[k], running, 1e-10);
      EXPECT_NEAR(l.gaps[k], t.records[k].landauer_gap, 1e-12);
    }
  }
}

TEST(Landauer, ViolationsListMatchesThreshold) {
  const LandauerSeries l = landauer_series(run_trajectory(fig4_spec(kPi / 4.0), 100), 1.0);
  std::vector<std::size_t> expected;
  for (std::size_t k = 0; k < l.gaps.size(); ++k)
    if (l.gaps[k] < -1e-10) expected.push_back(k + 1);
  EXPECT_EQ(l.violations, expected);
}

TEST(Landauer, RejectsIncompleteTrajectory) {
  Trajectory t = run_trajectory(fig4_spec(0.0), 5);
  t.records.pop_back();
  EXPECT_THROW(landauer_series(t, 1.0), precondition_error);
}

// --- BLP ----------------------------------------------------------------------

TEST(BLP, FromDistancesSumsPositiveIncrements) {
  const std::vector<double> d{1.0, 0.5, 0.7, 0.6, 0.9, 1.0, 0.2};
  const BLPResult r = blp_from_distances(d);
  EXPECT_NEAR(r.measure, 0.2 + 0.3 + 0.1, 1e-15);
  const std::vector<std::pair<std::size_t, std::size_t>> intervals{{2, 2}, {4, 5}};
  EXPECT_EQ(r.positive_intervals, intervals);
  ASSERT_EQ(r.increments.size(), 6U);
  EXPECT_NEAR(r.increments[0], -0.5, 1e-15);
}

TEST(BLP, MonotoneAndNoisySeriesGiveZero) {
  EXPECT_EQ(blp_from_distances(std::vector<double>{1.0, 0.8, 0.8, 0.1}).measure, 0.0);
  const BLPResult noise = blp_from_distances(std::vector<double>{0.5, 0.5 + 1e-13, 0.5});
  EXPECT_EQ(noise.measure, 0.0);
  EXPECT_TRUE(noise.positive_intervals.empty());
}

TEST(BLP, AdditiveOverSegments) {
  const Trajectory a = run_trajectory(fig4_spec(0.5, {InitialState::Kind::plus}), 100);
  const Trajectory b = run_trajectory(fig4_spec(0.5, {InitialState::Kind::minus}), 100);
  const std::vector<double> d = trace_distance_series(a, b);
  const double whole = blp_measure(a, b).measure;
  for (std::size_t cut : {1U, 37U, 50U, 99U}) {
    const std::span<const double> all(d);
    const double parts = blp_from_distances(all.subspan(0, cut + 1)).measure + blp_from_distances(all.subspan(cut)).measure;
    EXPECT_NEAR(whole, parts, 1e-12) << cut;
  }
}

TEST(BLP, MarkovianPairHasZeroMeasure) {
  const BLPResult r = blp_measure(run_trajectory(fig4_spec(0.0, {InitialState::Kind::plus}), 100),
                                  run_trajectory(fig4_spec(0.0, {InitialState::Kind::minus}), 100));
  EXPECT_LE(r.measure, 1e-10);
  EXPECT_NEAR(r.distances.front(), 1.0, 1e-12);
}

TEST(BLP, NonMarkovianOrdering) {
  auto measure = [](double j_ee) {
    return blp_measure(run_trajectory(fig4_spec(j_ee, {InitialState::Kind::plus}), 100),
                       run_trajectory(fig4_spec(j_ee, {InitialState::Kind::minus}), 100))
        .measure;
  };
  const double mid = measure(10.0 * kPi / 43.0), strong = measure(kPi / 4.0);
  EXPECT_GT(mid, 0.0);
  EXPECT_GT(strong, 0.0);
  EXPECT_GT(strong, mid);
}

TEST(BLP, IdenticalStatesGiveZero) {
  const Trajectory a = run_trajectory(fig4_spec(kPi / 4.0), 50);
  const BLPResult r = blp_measure(a, a);
  EXPECT_EQ(r.measure, 0.0);
  for (double d : r.distances) EXPECT_EQ(d, 0.0);
}

TEST(BLP, RejectsMismatchedDynamics) {
  const Trajectory a = run_trajectory(fig4_spec(0.3), 20);
  EXPECT_THROW(blp_measure(a, run_trajectory(fig4_spec(0.2), 20)), precondition_error);
  EXPECT_THROW(blp_measure(a, run_trajectory(fig4_spec(0.3), 21)), precondition_error);
  RunSpec noisy = fig4_spec(0.3);
  noisy.env = {EnvMode::gaussian, 1.0, 0.1, 1, Truncation::resample_positive};
  RunSpec other_seed = noisy;
  other_seed.env.seed = 2;
  EXPECT_THROW(blp_measure(run_trajectory(noisy, 20), run_trajectory(other_seed, 20)), precondition_error);
}

TEST(BLPMaximize, AntipodesAreOrthogonal) {
  for (BlochPoint p : {BlochPoint{0.3, 1.2}, BlochPoint{kPi / 2, 0.0}, BlochPoint{0.0, 0.0}}) {
    const BlochPoint q = antipode(p);
    EXPECT_NEAR(trace_distance(bloch_state(p.theta, p.phi), bloch_state(q.theta, q.phi)), 1.0, 1e-12);
  }
}

TEST(BLPMaximize, MarkovianGridIsFlatZero) {
  const BLPSearch s = blp_maximize(fig4_spec(0.0), 60, 8, 4, 1);
  EXPECT_EQ(s.grid.size(), 32U);
  for (const BLPGridPoint& g : s.grid) EXPECT_LE(g.measure, 1e-10);
  EXPECT_EQ(s.best.polar_index, 0U);
  EXPECT_EQ(s.best.azimuth_index, 0U);
}

TEST(BLPMaximize, FindsEquatorialPairAndBeatsPoles) {
  const BLPSearch s = blp_maximize(fig4_spec(kPi / 4.0), 100, 8, 4, 1);
  EXPECT_NEAR(s.best.state.theta, kPi / 2.0, 1e-15);
  EXPECT_EQ(s.best.state.phi, 0.0);
  const double poles = s.grid[0].measure;  // theta = 0: (|0>, |1>)
  EXPECT_GE(s.best.measure, poles);
  for (const BLPGridPoint& g : s.grid) EXPECT_LE(g.measure, s.best.measure + 1e-9);
  EXPECT_NEAR(s.result.measure, s.best.measure, 1e-12);
  EXPECT_NEAR(trace_distance(s.result.pair.first, plus_state()), 0.0, 1e-12);
}

TEST(BLPMaximize, ParallelMatchesSerial) {
  const BLPSearch serial = blp_maximize(fig4_spec(0.5), 40, 4, 4, 1);
  const BLPSearch parallel = blp_maximize(fig4_spec(0.5), 40, 4, 4, 4);
  for (std::size_t i = 0; i < serial.grid.size(); ++i) EXPECT_EQ(serial.grid[i].measure, parallel.grid[i].measure);
  EXPECT_EQ(serial.best.polar_index, parallel.best.polar_index);
  EXPECT_EQ(serial.best.azimuth_index, parallel.best.azimuth_index);
}

TEST(BLPMaximize, RejectsCoarseGrid) {
  EXPECT_THROW(blp_maximize(fig4_spec(0.0), 10, 3, 4, 1), precondition_error);
}
