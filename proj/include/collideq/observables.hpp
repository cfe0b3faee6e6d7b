#pragma once

// Information-theoretic functionals of density matrices. Entropies are in nats.

#include <algorithm>
#include <cmath>
#include <limits>

#include "collideq/smallmat.hpp"

namespace collideq {

/// -Tr(rho ln rho), with 0 ln 0 = 0.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lambda : hermitian_eigenvalues(rho.matrix()))
    if (lambda > 0.0) s -= lambda * std::log(lambda);
  return std::max(s, 0.0);
}

namespace detail {

// Strict weak order on matrix entries; lets symmetric functionals see their
// arguments in a fixed order so f(a, b) and f(b, a) round identically.
inline bool entrywise_less(const ComplexMatrix& a, const ComplexMatrix& b) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const complex x = a(i, j), y = b(i, j);
      if (x.real() != y.real()) return x.real() < y.real();
      if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
  return false;
}

}  // namespace detail

/// Half the trace norm of rho1 - rho2. Exactly symmetric in its arguments.
inline double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require(rho1.dim() == rho2.dim(), "trace_distance: dimension mismatch");
  const bool flip = detail::entrywise_less(rho2.matrix(), rho1.matrix());
  const ComplexMatrix diff = flip ? rho2.matrix() - rho1.matrix() : rho1.matrix() - rho2.matrix();
  double s = 0.0;
  for (double lambda : hermitian_eigenvalues(diff)) s += std::abs(lambda);
  return std::clamp(0.5 * s, 0.0, 1.0);
}

/// Squared Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.
/// Eigenvalues below the rounding floor are treated as exact zeros so that
/// pure arguments do not pick up sqrt(eps) noise.
inline double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require(rho1.dim() == rho2.dim(), "fidelity: dimension mismatch");
  constexpr double floor = 16.0 * std::numeric_limits<double>::epsilon();
  auto safe_sqrt = [](double x) { return x > floor ? std::sqrt(x) : 0.0; };
  const ComplexMatrix root = hermitian_function(rho1.matrix(), safe_sqrt);
  const ComplexMatrix inner = root * rho2.matrix() * root;
  double s = 0.0;
  for (double lambda : hermitian_eigenvalues((inner + inner.adjoint()) * complex(0.5))) s += safe_sqrt(lambda);
  return std::clamp(s * s, 0.0, 1.0);
}

/// S(A) + S(B) - S(AB) for a bipartite state.
inline double mutual_information(const DensityMatrix& rho_joint) {
  require(rho_joint.subsystem_dims().size() == 2, "mutual_information: bipartite state required");
  const double s_a = von_neumann_entropy(partial_trace(rho_joint, {0}));
  const double s_b = von_neumann_entropy(partial_trace(rho_joint, {1}));
  const double mi = s_a + s_b - von_neumann_entropy(rho_joint);
  return mi < 0.0 && mi > -tol::spectral ? 0.0 : mi;
}

}  // namespace collideq
