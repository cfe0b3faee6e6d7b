#include <gtest/gtest.h>

#include <cmath>

#include "collideq/observables.hpp"
#include "collideq/spinmodel.hpp"
#include "testkit.hpp"

using namespace collideq;
using testkit::Rng;

namespace {

// Qubit closed form Tr(r1 r2) + 2 sqrt(det r1 det r2); the determinant term
// vanishes identically when either argument is pure.
double qubit_fidelity(const DensityMatrix& a, const DensityMatrix& b, bool a_pure) {
  if (a_pure) return (a.matrix() * b.matrix()).trace().real();
  auto det = [](const DensityMatrix& r) { return (r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0)).real(); };
  return (a.matrix() * b.matrix()).trace().real() + 2.0 * std::sqrt(std::max(det(a) * det(b), 0.0));
}

}  // namespace

TEST(Entropy, ReferenceValues) {
  EXPECT_NEAR(von_neumann_entropy(zero_state()), 0.0, 1e-15);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(2)), std::log(2.0), 1e-15);
  EXPECT_NEAR(von_neumann_entropy(thermal_state(1.0, 1.0)), 0.582203108888218, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(8)), std::log(8.0), 1e-14);
}

TEST(Entropy, MatchesIndependentEigensolver) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = testkit::random_density(trial % 2 ? 8 : 4, rng);
    const double s = von_neumann_entropy(rho);
    EXPECT_NEAR(s, testkit::oracle_entropy(rho.matrix()), 1e-9);
    EXPECT_LE(s, std::log(static_cast<double>(rho.dim())) + 1e-12);
  }
}

TEST(TraceDistance, ReferenceValues) {
  const DensityMatrix plus = plus_state();
  EXPECT_EQ(trace_distance(plus, plus), 0.0);
  EXPECT_NEAR(trace_distance(zero_state(), one_state()), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(DensityMatrix::maximally_mixed(2), plus), 0.5, 1e-15);
  EXPECT_THROW(trace_distance(plus, DensityMatrix::maximally_mixed(4)), precondition_error);
}

TEST(TraceDistance, MetricOnRandomTriples) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testkit::random_density(4, rng), b = testkit::random_density(4, rng), c = testkit::random_density(4, rng);
    EXPECT_EQ(trace_distance(a, b), trace_distance(b, a));
    EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-10);
  }
}

TEST(TraceDistance, ContractiveUnderPartialTrace) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testkit::random_density(4, rng, {2, 2}), b = testkit::random_density(4, rng, {2, 2});
    EXPECT_LE(trace_distance(partial_trace(a, {0}), partial_trace(b, {0})), trace_distance(a, b) + 1e-10);
  }
}

TEST(Fidelity, ReferenceValues) {
  const DensityMatrix plus = plus_state();
  EXPECT_NEAR(fidelity(plus, plus), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(zero_state(), one_state()), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(DensityMatrix::maximally_mixed(2), zero_state()), 0.5, 1e-12);
  EXPECT_THROW(fidelity(plus, DensityMatrix::maximally_mixed(4)), precondition_error);
}

TEST(Fidelity, QubitClosedFormAndFuchsVanDeGraaf) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const bool pure = trial % 3 == 0;
    const DensityMatrix a = pure ? testkit::random_pure_qubit(rng) : testkit::random_density(2, rng);
    const DensityMatrix b = testkit::random_density(2, rng);
    const double f = fidelity(a, b), d = trace_distance(a, b);
    EXPECT_NEAR(f, qubit_fidelity(a, b, pure), 1e-9);
    EXPECT_NEAR(f, fidelity(b, a), 1e-9);
    EXPECT_LE(1.0 - std::sqrt(f), d + 1e-9);
    EXPECT_LE(d, std::sqrt(1.0 - f) + 1e-9);
  }
}

TEST(MutualInformation, ReferenceValues) {
  Rng rng(5);
  EXPECT_NEAR(mutual_information(kron(testkit::random_density(2, rng), testkit::random_density(2, rng))), 0.0, 1e-10);
  const double r = 1.0 / std::sqrt(2.0);
  const DensityMatrix bell(DensityMatrix::pure({r, 0.0, 0.0, r}).matrix(), {2, 2});
  EXPECT_NEAR(mutual_information(bell), 2.0 * std::log(2.0), 1e-10);
}

TEST(MutualInformation, MatchesEntropySumOracle) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho = testkit::random_density(4, rng, {2, 2});
    const double expected = testkit::oracle_entropy(testkit::oracle_partial_trace_qubits(rho.matrix(), 2, {0})) +
                            testkit::oracle_entropy(testkit::oracle_partial_trace_qubits(rho.matrix(), 2, {1})) -
                            testkit::oracle_entropy(rho.matrix());
    const double mi = mutual_information(rho);
    EXPECT_NEAR(mi, expected, 1e-9);
    EXPECT_GE(mi, 0.0);
    EXPECT_LE(mi, 2.0 * std::log(2.0) + 1e-10);
  }
}

TEST(MutualInformation, RequiresBipartiteState) {
  EXPECT_THROW(mutual_information(DensityMatrix::maximally_mixed(4)), precondition_error);
}
