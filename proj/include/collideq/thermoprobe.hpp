#pragma once

// Trajectory-level probes: Landauer bound bookkeeping and the discrete BLP
// non-Markovianity measure built from trace-distance increments.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "collideq/collider.hpp"
#include "collideq/observables.hpp"
#include "collideq/parallel.hpp"

namespace collideq {

// ---------------------------------------------------------------------------
// Landauer bound
// ---------------------------------------------------------------------------

inline constexpr double kViolationThreshold = -1e-10;

struct LandauerSeries {
  std::vector<double> gaps;        // g_n = beta dQ_n - dS_n, index n - 1
  std::vector<double> cumulative;  // G_n = beta Q_n - (S_0 - S_n), index n - 1
  std::vector<std::size_t> violations;             // steps n with g_n below threshold
  std::vector<std::size_t> cumulative_violations;  // steps n with G_n below threshold
};

inline LandauerSeries landauer_series(const Trajectory& traj, double beta) {
  require(traj.records.size() == traj.n_steps && traj.system_states.size() == traj.n_steps + 1,
          "landauer_series: incomplete trajectory");
  LandauerSeries out;
  out.gaps.reserve(traj.n_steps);
  out.cumulative.reserve(traj.n_steps);
  const double s0 = von_neumann_entropy(traj.system_states.front());
  double heat = 0.0;
  for (const StepRecord& r : traj.records) {
    heat += r.delta_Q;
    const double g = beta * r.delta_Q - r.delta_S;
    const double big_g = beta * heat - (s0 - r.entropy_S);
    out.gaps.push_back(g);
    out.cumulative.push_back(big_g);
    if (g < kViolationThreshold) out.violations.push_back(r.n);
    if (big_g < kViolationThreshold) out.cumulative_violations.push_back(r.n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// BLP measure
// ---------------------------------------------------------------------------

/// Increments at or below this are treated as rounding noise.
inline constexpr double kPositiveIncrement = 1e-12;

struct BLPResult {
  double measure = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> positive_intervals;  // inclusive step ranges
  std::vector<double> distances;   // D_n, n = 0..N
  std::vector<double> increments;  // sigma_n = D_n - D_{n-1}, index n - 1
  std::pair<DensityMatrix, DensityMatrix> pair;
};

/// Accumulates the positive increments of a trace-distance sequence D_0..D_N.
inline BLPResult blp_from_distances(std::span<const double> distances) {
  BLPResult r;
  r.distances.assign(distances.begin(), distances.end());
  for (std::size_t n = 1; n < distances.size(); ++n) {
    const double sigma = distances[n] - distances[n - 1];
    r.increments.push_back(sigma);
    if (sigma <= kPositiveIncrement) continue;
    r.measure += sigma;
    if (!r.positive_intervals.empty() && r.positive_intervals.back().second + 1 == n)
      r.positive_intervals.back().second = n;
    else
      r.positive_intervals.emplace_back(n, n);
  }
  return r;
}

inline std::vector<double> trace_distance_series(const Trajectory& a, const Trajectory& b) {
  require(a.system_states.size() == b.system_states.size(), "trace_distance_series: length mismatch");
  std::vector<double> d;
  d.reserve(a.system_states.size());
  for (std::size_t n = 0; n < a.system_states.size(); ++n)
    d.push_back(trace_distance(a.system_states[n], b.system_states[n]));
  return d;
}

/// The two trajectories must share configuration and environment realization.
inline BLPResult blp_measure(const Trajectory& traj1, const Trajectory& traj2) {
  require(traj1.spec.same_dynamics(traj2.spec) && traj1.n_steps == traj2.n_steps,
          "blp_measure: trajectories differ in configuration or environment realization");
  require(traj1.betas == traj2.betas, "blp_measure: trajectories saw different environment states");
  BLPResult r = blp_from_distances(trace_distance_series(traj1, traj2));
  r.pair = {traj1.system_states.front(), traj2.system_states.front()};
  return r;
}

struct BlochPoint {
  double theta = 0.0;
  double phi = 0.0;
};

inline BlochPoint antipode(const BlochPoint& p) { return {std::numbers::pi - p.theta, p.phi + std::numbers::pi}; }

struct BLPGridPoint {
  std::size_t polar_index = 0;
  std::size_t azimuth_index = 0;
  BlochPoint state;
  double measure = 0.0;
};

struct BLPSearch {
  BLPGridPoint best;
  BLPResult result;
  std::vector<BLPGridPoint> grid;  // polar-major order
};

/// Maximizes the BLP measure over antipodal pure-state pairs on a
/// latitude-longitude grid: theta_m = pi m / polar, phi_k = 2 pi k / azimuth.
/// Ties (within 1e-9 relative) keep the lowest (polar, azimuth) index.
inline BLPSearch blp_maximize(const RunSpec& base, std::size_t n_steps, std::size_t azimuth = 24,
                              std::size_t polar = 12, std::size_t workers = default_worker_count()) {
  require(azimuth >= 4 && polar >= 4, "blp_maximize: grid resolution must be >= 4");
  BLPSearch search;
  search.grid.resize(azimuth * polar);
  for (std::size_t m = 0; m < polar; ++m)
    for (std::size_t k = 0; k < azimuth; ++k) {
      BLPGridPoint& g = search.grid[m * azimuth + k];
      g.polar_index = m;
      g.azimuth_index = k;
      g.state = {std::numbers::pi * static_cast<double>(m) / static_cast<double>(polar),
                 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(azimuth)};
    }

  auto run_pair = [&](const BlochPoint& p) {
    RunSpec s1 = base, s2 = base;
    s1.initial = InitialState::at(p.theta, p.phi);
    const BlochPoint q = antipode(p);
    s2.initial = InitialState::at(q.theta, q.phi);
    return blp_measure(run_trajectory(s1, n_steps), run_trajectory(s2, n_steps));
  };

  parallel_for(search.grid.size(), workers, [&](std::size_t i) { search.grid[i].measure = run_pair(search.grid[i].state).measure; });

  std::size_t best = 0;
  for (std::size_t i = 1; i < search.grid.size(); ++i) {
    const double incumbent = search.grid[best].measure;
    if (search.grid[i].measure > incumbent + 1e-9 * std::max(1.0, std::abs(incumbent))) best = i;
  }
  search.best = search.grid[best];
  search.result = run_pair(search.best.state);
  return search;
}

}  // namespace collideq
