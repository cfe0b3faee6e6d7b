#pragma once

// Experiment drivers: homogenization, noisy-environment sweeps and their
// point-cloud spread, inter-environment coupling sweeps, and synchrony
// statistics between distinguishability, Landauer gap and correlations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "collideq/collider.hpp"
#include "collideq/observables.hpp"
#include "collideq/parallel.hpp"
#include "collideq/thermoprobe.hpp"

namespace collideq {

inline constexpr std::size_t kAverageStateNodes = 1000;

/// Environment preparation averaged over the sampler's beta distribution.
/// Gaussian case: midpoint quadrature on beta0 +- 8 sigma, truncated to beta > 0
/// under `resample_positive`.
inline DensityMatrix average_env_state(const EnvSampler& env, double omega_e) {
  env.validate();
  if (env.mode == EnvMode::fixed || env.sigma_beta == 0.0) return thermal_state(env.beta0, omega_e);
  const double lo = env.beta0 - 8.0 * env.sigma_beta, hi = env.beta0 + 8.0 * env.sigma_beta;
  const double h = (hi - lo) / static_cast<double>(kAverageStateNodes);
  double weight_sum = 0.0, upper = 0.0;
  for (std::size_t i = 0; i < kAverageStateNodes; ++i) {
    const double beta = lo + (static_cast<double>(i) + 0.5) * h;
    if (env.truncation == Truncation::resample_positive && beta <= 0.0) continue;
    const double z = (beta - env.beta0) / env.sigma_beta;
    const double w = std::exp(-0.5 * z * z);
    weight_sum += w;
    upper += w / (1.0 + std::exp(beta * omega_e));
  }
  require(weight_sum > 0.0, "average_env_state: no quadrature mass at positive beta");
  upper /= weight_sum;
  return DensityMatrix(ComplexMatrix::diagonal({upper, 1.0 - upper}));
}

// ---------------------------------------------------------------------------
// Homogenization
// ---------------------------------------------------------------------------

struct HomogenizationSeries {
  Trajectory trajectory;
  DensityMatrix target;            // averaged environment state
  std::vector<double> distances;   // D(rho_S(n), target), n = 0..N
  std::vector<double> fidelities;  // F(rho_S(n), target), n = 0..N
};

inline HomogenizationSeries homogenization_experiment(const RunSpec& spec, std::size_t n_steps) {
  require(spec.model.j_ee == 0.0, "homogenization_experiment: requires j_ee = 0");
  HomogenizationSeries out{run_trajectory(spec, n_steps), average_env_state(spec.env, spec.model.omega_e), {}, {}};
  for (const DensityMatrix& rho : out.trajectory.system_states) {
    out.distances.push_back(trace_distance(rho, out.target));
    out.fidelities.push_back(fidelity(rho, out.target));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Asymptotic fluctuations and noise sweeps
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMinTailSamples = 20;

inline std::size_t tail_length(const Trajectory& traj, double tail_fraction) {
  require(tail_fraction > 0.0 && tail_fraction < 1.0, "tail_fraction must lie in (0, 1)");
  const auto len = static_cast<std::size_t>(std::floor(static_cast<double>(traj.records.size()) * tail_fraction));
  require(len >= kMinTailSamples, "asymptotic_fluctuation: tail window holds fewer than 20 samples");
  return len;
}

/// Root total variance of the Bloch vector components over the trajectory tail.
inline double asymptotic_fluctuation(const Trajectory& traj, double tail_fraction) {
  const std::size_t len = tail_length(traj, tail_fraction);
  const auto first = traj.records.end() - static_cast<std::ptrdiff_t>(len);
  double total = 0.0;
  const double n = static_cast<double>(len);
  for (std::size_t c = 0; c < 3; ++c) {
    // Shifted by the first tail sample: a constant component gives exactly zero.
    const double shift = first->bloch[c];
    double mean = 0.0;
    for (auto it = first; it != traj.records.end(); ++it) mean += it->bloch[c] - shift;
    mean /= n;
    double var = 0.0;
    for (auto it = first; it != traj.records.end(); ++it) {
      const double d = it->bloch[c] - shift - mean;
      var += d * d;
    }
    total += var / n;
  }
  return std::sqrt(total);
}

/// Mean of D(rho_S, target) over the trajectory tail.
inline double tail_mean_distance(const Trajectory& traj, const DensityMatrix& target, double tail_fraction) {
  const std::size_t len = tail_length(traj, tail_fraction);
  double s = 0.0;
  for (std::size_t n = traj.system_states.size() - len; n < traj.system_states.size(); ++n)
    s += trace_distance(traj.system_states[n], target);
  return s / static_cast<double>(len);
}

struct SweepRow {
  double axis = 0.0;
  std::size_t replica = 0;
  double sigma_r = 0.0;
  double mean_D = 0.0;
};

struct SweepResult {
  std::vector<double> axis;
  std::vector<SweepRow> rows;  // axis-major, replica-minor
  std::size_t replicas = 0;
  std::uint64_t master_seed = 0;

  std::vector<double> mean_sigma_r() const {
    std::vector<double> m(axis.size(), 0.0);
    for (std::size_t p = 0; p < axis.size(); ++p) {
      for (std::size_t r = 0; r < replicas; ++r) m[p] += rows[p * replicas + r].sigma_r;
      m[p] /= static_cast<double>(replicas);
    }
    return m;
  }

  std::vector<std::pair<double, double>> cloud() const {
    std::vector<std::pair<double, double>> pts;
    for (const SweepRow& r : rows) pts.emplace_back(r.axis, r.sigma_r);
    return pts;
  }
};

struct NoiseSweepOptions {
  std::size_t n_steps = 300;
  double tail_fraction = 0.5;
  std::size_t workers = default_worker_count();
};

/// For each sigma_beta, M trajectories with independent environment
/// realizations. Replica r at grid point p uses trajectory index p*M + r, so the
/// table does not depend on how the work is scheduled.
inline SweepResult noise_sweep(const RunSpec& base, std::span<const double> sigma_grid, std::size_t replicas,
                               const NoiseSweepOptions& opt = {}) {
  require(!sigma_grid.empty(), "noise_sweep: empty sigma_beta grid");
  require(replicas >= 1, "noise_sweep: need at least one replica");
  require(std::is_sorted(sigma_grid.begin(), sigma_grid.end()), "noise_sweep: grid must be sorted ascending");

  SweepResult out;
  out.axis.assign(sigma_grid.begin(), sigma_grid.end());
  out.replicas = replicas;
  out.master_seed = base.env.seed;
  out.rows.resize(sigma_grid.size() * replicas);

  parallel_for(out.rows.size(), opt.workers, [&](std::size_t i) {
    const std::size_t p = i / replicas, r = i % replicas;
    RunSpec spec = base;
    spec.env.sigma_beta = sigma_grid[p];
    spec.env.mode = sigma_grid[p] > 0.0 ? EnvMode::gaussian : EnvMode::fixed;
    spec.trajectory_index = i;
    const Trajectory traj = run_trajectory(spec, opt.n_steps);
    const DensityMatrix target = average_env_state(spec.env, spec.model.omega_e);
    out.rows[i] = {sigma_grid[p], r, asymptotic_fluctuation(traj, opt.tail_fraction),
                   tail_mean_distance(traj, target, opt.tail_fraction)};
  });
  return out;
}

// ---------------------------------------------------------------------------
// Point-cloud spread
// ---------------------------------------------------------------------------

/// Bounding-box diagonal / 50.
inline double default_cell_size(std::span<const std::pair<double, double>> points) {
  require(!points.empty(), "default_cell_size: no points");
  double x0 = points[0].first, x1 = x0, y0 = points[0].second, y1 = y0;
  for (const auto& [x, y] : points) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  const double diag = std::hypot(x1 - x0, y1 - y0);
  require(diag > 0.0, "default_cell_size: all points coincide; pass an explicit cell size");
  return diag / 50.0;
}

/// Occupancy-grid area: number of occupied square cells times cell_size^2.
inline double cloud_area(std::span<const std::pair<double, double>> points, double cell_size) {
  require(points.size() >= 2, "cloud_area: need at least two points");
  require(std::isfinite(cell_size) && cell_size > 0.0, "cloud_area: cell_size must be > 0");
  std::set<std::pair<long long, long long>> occupied;
  for (const auto& [x, y] : points)
    occupied.emplace(static_cast<long long>(std::floor(x / cell_size)), static_cast<long long>(std::floor(y / cell_size)));
  return static_cast<double>(occupied.size()) * cell_size * cell_size;
}

struct SpreadRow {
  double omega_s = 0.0;
  double omega_e = 0.0;
  double area = 0.0;
};

/// Cloud area of the (sigma_beta, sigma_r) scatter for every (omega_s, omega_e)
/// grid point. A non-positive cell_size selects the per-cloud default.
inline std::vector<SpreadRow> spread_sweep(const RunSpec& base, std::span<const double> omega_s_grid,
                                           std::span<const double> omega_e_grid, std::span<const double> sigma_grid,
                                           std::size_t replicas, double cell_size, const NoiseSweepOptions& opt = {}) {
  std::vector<SpreadRow> rows;
  for (double ws : omega_s_grid)
    for (double we : omega_e_grid) {
      RunSpec spec = base;
      spec.model.omega_s = ws;
      spec.model.omega_e = we;
      const auto cloud = noise_sweep(spec, sigma_grid, replicas, opt).cloud();
      const double cs = cell_size > 0.0 ? cell_size : default_cell_size(cloud);
      rows.push_back({ws, we, cloud_area(cloud, cs)});
    }
  return rows;
}

// ---------------------------------------------------------------------------
// Inter-environment coupling sweep
// ---------------------------------------------------------------------------

struct JeeSeries {
  double j_ee = 0.0;
  std::vector<double> distances;          // D(rho_1, rho_2), n = 0..N
  std::vector<double> sigma;              // D_n - D_{n-1}, index n - 1
  std::vector<double> gaps;               // beta dQ_n - dS_n
  std::vector<double> cumulative_gaps;    // beta Q_n - S_n
  std::vector<double> mutual_info;        // I(S : E_n) before collision n
  std::vector<double> delta_mutual_info;  // I_n - I_{n-1}, I_0 = 0
  double blp = 0.0;
  std::size_t violations = 0;             // g_n below kViolationThreshold
  Trajectory first;                       // the |+> run

  std::vector<double> reversed_gaps() const {
    std::vector<double> r(gaps.size());
    std::transform(gaps.begin(), gaps.end(), r.begin(), [](double g) { return -g; });
    return r;
  }
};

/// Runs the (|+>, |->) pair through the cell for each j_ee, all over the same
/// environment realization. Thermodynamic series come from the |+> run.
inline std::vector<JeeSeries> jee_sweep(const RunSpec& base, std::span<const double> jee_values, std::size_t n_steps,
                                        std::size_t workers = default_worker_count()) {
  for (double j : jee_values)
    require(j >= 0.0 && j <= kFullSwapCoupling + tol::algebraic, "jee_sweep: j_ee values must lie in [0, pi/4]");
  std::vector<JeeSeries> out(jee_values.size());
  parallel_for(jee_values.size(), workers, [&](std::size_t i) {
    RunSpec s1 = base;
    s1.engine = Engine::cell;
    s1.model.j_ee = jee_values[i];
    s1.initial = {InitialState::Kind::plus};
    RunSpec s2 = s1;
    s2.initial = {InitialState::Kind::minus};
    Trajectory t1 = run_trajectory(s1, n_steps);
    const Trajectory t2 = run_trajectory(s2, n_steps);

    JeeSeries& js = out[i];
    js.j_ee = jee_values[i];
    const BLPResult blp = blp_measure(t1, t2);
    js.distances = blp.distances;
    js.sigma = blp.increments;
    js.blp = blp.measure;
    const LandauerSeries ls = landauer_series(t1, s1.model.beta);
    js.gaps = ls.gaps;
    js.cumulative_gaps = ls.cumulative;
    js.violations = ls.violations.size();
    double prev = 0.0;
    for (const StepRecord& r : t1.records) {
      js.mutual_info.push_back(r.mutual_info_pre);
      js.delta_mutual_info.push_back(r.mutual_info_pre - prev);
      prev = r.mutual_info_pre;
    }
    js.first = std::move(t1);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Synchrony
// ---------------------------------------------------------------------------

/// Pearson correlation; empty when either series has (near) zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "pearson: series lengths differ");
  if (x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  constexpr double kFlat = 1e-20;
  if (sxx <= kFlat * n || syy <= kFlat * n) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

inline constexpr double kGenuineViolation = -1e-6;

struct SynchronyReport {
  std::optional<double> sigma_vs_delta_mi;
  std::optional<double> reversed_gap_vs_delta_mi;
  std::optional<double> sigma_vs_reversed_gap;
  bool sigma_all_zero = false;
  std::vector<std::size_t> co_occurrences;           // sigma_n > 0, g_n < 0 and dI_n < 0 together
  std::vector<std::size_t> genuine_violations;       // g_n < -1e-6
  std::vector<std::size_t> unexplained_violations;   // ... with neither dI_n < 0 nor sigma_n > 0
};

inline SynchronyReport synchrony_report(const JeeSeries& s) {
  require(s.sigma.size() == s.gaps.size() && s.gaps.size() == s.delta_mutual_info.size(),
          "synchrony_report: series lengths differ");
  SynchronyReport r;
  const std::vector<double> neg_g = s.reversed_gaps();
  r.sigma_vs_delta_mi = pearson(s.sigma, s.delta_mutual_info);
  r.reversed_gap_vs_delta_mi = pearson(neg_g, s.delta_mutual_info);
  r.sigma_vs_reversed_gap = pearson(s.sigma, neg_g);
  r.sigma_all_zero = std::all_of(s.sigma.begin(), s.sigma.end(), [](double v) { return v <= kPositiveIncrement; });
  for (std::size_t i = 0; i < s.sigma.size(); ++i) {
    const std::size_t n = i + 1;
    const bool rising = s.sigma[i] > kPositiveIncrement;
    const bool mi_drop = s.delta_mutual_info[i] < 0.0;
    if (rising && s.gaps[i] < 0.0 && mi_drop) r.co_occurrences.push_back(n);
    if (s.gaps[i] < kGenuineViolation) {
      r.genuine_violations.push_back(n);
      if (!rising && !mi_drop) r.unexplained_violations.push_back(n);
    }
  }
  return r;
}

}  // namespace collideq
