#pragma once

// Collision dynamics: the memoryless chain (system meets a fresh thermal spin
// every step) and the three-body dynamical cell in which consecutive
// environment spins also collide with each other.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "collideq/observables.hpp"
#include "collideq/smallmat.hpp"
#include "collideq/spinmodel.hpp"

namespace collideq {

// ---------------------------------------------------------------------------
// Environment preparation
// ---------------------------------------------------------------------------

enum class EnvMode { fixed, gaussian };
enum class Truncation { resample_positive, allow_negative };

struct EnvSampler {
  EnvMode mode = EnvMode::fixed;
  double beta0 = 1.0;
  double sigma_beta = 0.0;
  std::uint64_t seed = 0;
  Truncation truncation = Truncation::resample_positive;

  void validate() const {
    require(std::isfinite(beta0), "EnvSampler: beta0 must be finite");
    require(std::isfinite(sigma_beta) && sigma_beta >= 0.0, "EnvSampler: sigma_beta must be >= 0");
  }

  friend bool operator==(const EnvSampler&, const EnvSampler&) = default;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Sequence of inverse temperatures for one trajectory. Streams for different
/// trajectory indices are independent; the same (seed, index) always replays
/// the same sequence.
class BetaStream {
 public:
  BetaStream(const EnvSampler& sampler, std::uint64_t trajectory_index)
      : sampler_(sampler), engine_(splitmix64(sampler.seed ^ trajectory_index)) {
    sampler_.validate();
  }

  double next() {
    if (sampler_.mode == EnvMode::fixed || sampler_.sigma_beta == 0.0) return sampler_.beta0;
    std::normal_distribution<double> normal(sampler_.beta0, sampler_.sigma_beta);
    if (sampler_.truncation == Truncation::allow_negative) return normal(engine_);
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const double beta = normal(engine_);
      if (beta > 0.0) return beta;
    }
    throw precondition_error("BetaStream: cannot draw a positive beta from this distribution");
  }

 private:
  EnvSampler sampler_;
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Run description and records
// ---------------------------------------------------------------------------

enum class Engine { markov, cell };

struct InitialState {
  enum class Kind { plus, minus, zero, one, bloch, thermal };
  Kind kind = Kind::plus;
  double theta = 0.0;
  double phi = 0.0;

  /// `thermal` is the environment preparation state at beta0.
  DensityMatrix state(const ModelParams& params, double beta0) const {
    switch (kind) {
      case Kind::plus: return plus_state();
      case Kind::minus: return minus_state();
      case Kind::zero: return zero_state();
      case Kind::one: return one_state();
      case Kind::bloch: return bloch_state(theta, phi);
      case Kind::thermal: return thermal_state(beta0, params.omega_e);
    }
    return plus_state();
  }

  static InitialState at(double theta, double phi) { return {Kind::bloch, theta, phi}; }

  friend bool operator==(const InitialState&, const InitialState&) = default;
};

struct RunSpec {
  Engine engine = Engine::cell;
  ModelParams model;
  EnvSampler env;
  InitialState initial;
  std::uint64_t trajectory_index = 0;

  /// Equal up to the initial system state.
  bool same_dynamics(const RunSpec& o) const {
    return engine == o.engine && model == o.model && env == o.env && trajectory_index == o.trajectory_index;
  }

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct StepRecord {
  std::size_t n = 0;
  double delta_U = 0.0;        // system energy decrease Tr H_S (rho_{n-1} - rho_n)
  double delta_Q = 0.0;
  double work = 0.0;
  double entropy_S = 0.0;
  double delta_S = 0.0;       // entropy decrease S_{n-1} - S_n
  double landauer_gap = 0.0;  // beta dQ - dS
  double mutual_info_pre = 0.0;
  BlochVector bloch{};
};

struct Trajectory {
  RunSpec spec;
  std::size_t n_steps = 0;
  std::vector<StepRecord> records;            // records[k] describes step n = k + 1
  std::vector<DensityMatrix> system_states;  // system_states[n], n = 0..n_steps
  std::vector<double> betas;                  // every environment preparation, in draw order
  DensityMatrix final_cell;  // (S, E_{n+1}) for the cell engine, the system alone for markov
};

namespace detail {

inline StepRecord make_record(std::size_t n, const DensityMatrix& before, const DensityMatrix& after, double delta_q,
                              double mutual_info_pre, const ModelParams& params) {
  const ComplexMatrix h_s = local_hamiltonian(params.omega_s);
  StepRecord r;
  r.n = n;
  r.delta_U = (h_s * (before.matrix() - after.matrix())).trace().real();
  r.delta_Q = delta_q;
  r.work = r.delta_Q - r.delta_U;
  r.entropy_S = von_neumann_entropy(after);
  r.delta_S = von_neumann_entropy(before) - r.entropy_S;
  r.landauer_gap = params.beta * r.delta_Q - r.delta_S;
  r.mutual_info_pre = mutual_info_pre;
  r.bloch = bloch_vector(after);
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Markovian collision
// ---------------------------------------------------------------------------

struct MarkovStepResult {
  DensityMatrix system;
  DensityMatrix env_post;
  StepRecord record;
};

/// rho_SE = U0 V (rho_S (x) rho_E) V^dagger U0^dagger, then both marginals.
inline MarkovStepResult markov_step(const DensityMatrix& rho_s, const DensityMatrix& env, const ModelParams& params) {
  params.validate();
  require(rho_s.dim() == 2 && env.dim() == 2, "markov_step: qubit states required");
  DensityMatrix joint = kron(rho_s, env).conjugated(partial_swap(params.j_se));
  if (params.free_evolution != FreeEvolution::off) joint = joint.conjugated(free_evolution(params, 2));

  DensityMatrix system = partial_trace(joint, {0});
  DensityMatrix env_post = partial_trace(joint, {1});
  const double delta_q = (local_hamiltonian(params.omega_e) * (env_post.matrix() - env.matrix())).trace().real();
  StepRecord record = detail::make_record(0, rho_s, system, delta_q, 0.0, params);
  return {std::move(system), std::move(env_post), record};
}

// ---------------------------------------------------------------------------
// Dynamical cell
// ---------------------------------------------------------------------------

/// Correlated (S, E_{n+1}) marginal carried between iterations.
struct CellState {
  DensityMatrix rho;
  std::size_t step_index = 0;

  static CellState uncorrelated(const DensityMatrix& system, const DensityMatrix& env) {
    return {kron(system, env), 0};
  }

  DensityMatrix system() const { return partial_trace(rho, {0}); }
};

struct CellStepResult {
  CellState cell;
  StepRecord record;
};

/// One iteration of the three-body cell (S, E_n, E_{n+1}):
/// S-E_n collision, E_n-E_{n+1} collision, free evolution, then E_n is traced out.
/// Heat is the energy change of the environment pair under H_E (x) I + I (x) H_E.
inline CellStepResult cell_step(const CellState& cell, const DensityMatrix& fresh_env, const ModelParams& params) {
  params.validate();
  require(cell.rho.subsystem_dims() == std::vector<std::size_t>{2, 2}, "cell_step: cell must hold a (2,2) state");
  require(fresh_env.dim() == 2, "cell_step: fresh environment must be a qubit");

  const double mi_pre = mutual_information(cell.rho);
  const DensityMatrix system_before = partial_trace(cell.rho, {0});

  DensityMatrix joint = kron(cell.rho, fresh_env);
  const DensityMatrix env_pre = partial_trace(joint, {1, 2});

  const ComplexMatrix u0 = free_evolution(params, 3);
  joint = joint.conjugated(on_adjacent_pair(partial_swap(params.j_se), 0, 3));
  if (params.free_evolution == FreeEvolution::per_collision) joint = joint.conjugated(u0);
  joint = joint.conjugated(on_adjacent_pair(partial_swap(params.j_ee), 1, 3));
  if (params.free_evolution != FreeEvolution::off) joint = joint.conjugated(u0);

  const DensityMatrix env_post = partial_trace(joint, {1, 2});
  const double delta_q = (pair_hamiltonian(params.omega_e) * (env_post.matrix() - env_pre.matrix())).trace().real();

  CellState next{partial_trace(joint, {0, 2}), cell.step_index + 1};
  const DensityMatrix system_after = next.system();
  StepRecord record = detail::make_record(next.step_index, system_before, system_after, delta_q, mi_pre, params);
  return {std::move(next), record};
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

inline Trajectory run_trajectory(const RunSpec& spec, std::size_t n_steps) {
  require(n_steps >= 1, "run_trajectory: n_steps must be >= 1");
  spec.model.validate();
  spec.env.validate();

  BetaStream betas(spec.env, spec.trajectory_index);
  Trajectory traj;
  traj.spec = spec;
  traj.n_steps = n_steps;
  traj.records.reserve(n_steps);
  traj.system_states.reserve(n_steps + 1);

  const ModelParams& params = spec.model;
  DensityMatrix system = spec.initial.state(params, spec.env.beta0);
  traj.system_states.push_back(system);

  auto draw_env = [&] {
    const double beta = betas.next();
    traj.betas.push_back(beta);
    return thermal_state(beta, params.omega_e);
  };

  if (spec.engine == Engine::markov) {
    for (std::size_t n = 1; n <= n_steps; ++n) {
      MarkovStepResult step = markov_step(system, draw_env(), params);
      step.record.n = n;
      system = std::move(step.system);
      traj.records.push_back(step.record);
      traj.system_states.push_back(system);
    }
    traj.final_cell = system;
    return traj;
  }

  CellState cell = CellState::uncorrelated(system, draw_env());
  for (std::size_t n = 1; n <= n_steps; ++n) {
    CellStepResult step = cell_step(cell, draw_env(), params);
    cell = std::move(step.cell);
    traj.records.push_back(step.record);
    traj.system_states.push_back(cell.system());
  }
  traj.final_cell = cell.rho;
  return traj;
}

}  // namespace collideq
