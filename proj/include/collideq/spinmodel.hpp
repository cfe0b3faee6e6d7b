#pragma once

// Physical building blocks of the collision model. Basis convention: |0> = (1,0)
// with sigma_z|0> = +|0>, so |0> is the higher-energy level of H = omega sigma_z / 2.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "collideq/smallmat.hpp"

namespace collideq {

inline constexpr double kFullSwapCoupling = std::numbers::pi / 4.0;

enum class FreeEvolution { per_iteration, per_collision, off };

inline std::string to_string(FreeEvolution f) {
  switch (f) {
    case FreeEvolution::per_iteration: return "per-iteration";
    case FreeEvolution::per_collision: return "per-collision";
    case FreeEvolution::off: return "off";
  }
  return "?";
}

/// Dimensionless model parameters; the interaction and free-evolution times are
/// absorbed into the couplings and frequencies.
struct ModelParams {
  double omega_s = 3.0;
  double omega_e = 1.0;
  double j_se = std::numbers::pi / 32.0;
  double j_ee = 0.0;
  double beta = 1.0;
  FreeEvolution free_evolution = FreeEvolution::per_iteration;

  void validate() const {
    require(std::isfinite(omega_s) && omega_s > 0.0, "ModelParams: omega_s must be > 0");
    require(std::isfinite(omega_e) && omega_e > 0.0, "ModelParams: omega_e must be > 0");
    require(std::isfinite(beta), "ModelParams: beta must be finite");
    require(j_se >= 0.0 && j_se <= kFullSwapCoupling + tol::algebraic, "ModelParams: j_se must lie in [0, pi/4]");
    require(j_ee >= 0.0 && j_ee <= kFullSwapCoupling + tol::algebraic, "ModelParams: j_ee must lie in [0, pi/4]");
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline ComplexMatrix local_hamiltonian(double omega) {
  require(std::isfinite(omega) && omega > 0.0, "local_hamiltonian: omega must be > 0");
  return ComplexMatrix::diagonal({omega / 2.0, -omega / 2.0});
}

/// Gibbs state exp(-beta H)/Z of a single spin; negative beta gives the
/// population-inverted state.
inline DensityMatrix thermal_state(double beta, double omega) {
  require(std::isfinite(beta), "thermal_state: beta must be finite");
  require(std::isfinite(omega) && omega > 0.0, "thermal_state: omega must be > 0");
  // e^{-x/2} / (2 cosh(x/2)) == 1 / (1 + e^{x}), which stays finite for any x.
  const double x = beta * omega;
  const double upper = 1.0 / (1.0 + std::exp(x));
  const double lower = 1.0 / (1.0 + std::exp(-x));
  return DensityMatrix(ComplexMatrix::diagonal({upper, lower}));
}

/// Two-particle swap: U_sw |a>|b> = |b>|a>.
inline ComplexMatrix swap_operator() {
  ComplexMatrix s(4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) s(2 * b + a, 2 * a + b) = 1.0;
  return s;
}

/// Isotropic Heisenberg coupling j (sx sx + sy sy + sz sz).
inline ComplexMatrix heisenberg_hamiltonian(double j) {
  using namespace pauli;
  return (kron(x(), x()) + kron(y(), y()) + kron(z(), z())) * complex(j);
}

/// exp(-i H_int) for H_int = heisenberg_hamiltonian(j), in closed form
/// e^{ij} [cos(2j) I - i sin(2j) U_sw]. Leaves a two-particle state unchanged
/// with probability cos^2(2j) and swaps it with probability sin^2(2j).
inline ComplexMatrix partial_swap(double j) {
  require(std::isfinite(j) && j >= 0.0 && j <= kFullSwapCoupling + tol::algebraic,
          "partial_swap: coupling must lie in [0, pi/4]");
  const complex phase = std::polar(1.0, j);
  ComplexMatrix v = ComplexMatrix::identity(4) * complex(std::cos(2.0 * j)) +
                    swap_operator() * complex(0.0, -std::sin(2.0 * j));
  return v * phase;
}

/// Embeds a two-qubit gate acting on neighbouring parties (first, first+1) of an
/// n-qubit register.
inline ComplexMatrix on_adjacent_pair(const ComplexMatrix& gate, std::size_t first, std::size_t n_parties) {
  require(gate.dim() == 4, "on_adjacent_pair: gate must be 4x4");
  require(first + 1 < n_parties, "on_adjacent_pair: pair out of range");
  ComplexMatrix left = ComplexMatrix::identity(std::size_t{1} << first);
  ComplexMatrix right = ComplexMatrix::identity(std::size_t{1} << (n_parties - first - 2));
  return kron(kron(left, gate), right);
}

/// Sum of local Hamiltonians: party 0 is the system, the others environment spins.
inline ComplexMatrix free_hamiltonian(const ModelParams& params, std::size_t n_parties) {
  require(n_parties == 2 || n_parties == 3, "free_hamiltonian: n_parties must be 2 or 3");
  ComplexMatrix h = local_hamiltonian(params.omega_s);
  for (std::size_t k = 1; k < n_parties; ++k)
    h = kron(h, ComplexMatrix::identity(2)) + kron(ComplexMatrix::identity(h.dim()), local_hamiltonian(params.omega_e));
  return h;
}

/// exp(-i H_0) with H_0 the free Hamiltonian of `n_parties` spins.
inline ComplexMatrix free_evolution(const ModelParams& params, std::size_t n_parties) {
  const ComplexMatrix h = free_hamiltonian(params, n_parties);
  ComplexMatrix u(h.dim());
  for (std::size_t i = 0; i < h.dim(); ++i) u(i, i) = std::polar(1.0, -h(i, i).real());
  return u;
}

/// H_E (x) I + I (x) H_E, the energy of an environment pair.
inline ComplexMatrix pair_hamiltonian(double omega_e) {
  const ComplexMatrix h = local_hamiltonian(omega_e);
  return kron(h, ComplexMatrix::identity(2)) + kron(ComplexMatrix::identity(2), h);
}

// Qubit states -------------------------------------------------------------

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
inline DensityMatrix bloch_state(double theta, double phi) {
  return DensityMatrix::pure({complex(std::cos(theta / 2.0)), std::polar(std::sin(theta / 2.0), phi)});
}

inline DensityMatrix plus_state() { return bloch_state(std::numbers::pi / 2.0, 0.0); }
inline DensityMatrix minus_state() { return bloch_state(std::numbers::pi / 2.0, std::numbers::pi); }
inline DensityMatrix zero_state() { return DensityMatrix::pure({1.0, 0.0}); }
inline DensityMatrix one_state() { return DensityMatrix::pure({0.0, 1.0}); }

using BlochVector = std::array<double, 3>;

inline BlochVector bloch_vector(const DensityMatrix& rho) {
  require(rho.dim() == 2, "bloch_vector: qubit state required");
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

}  // namespace collideq
