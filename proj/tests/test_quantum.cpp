#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "exparc/classical.hpp"
#include "exparc/errors.hpp"
#include "exparc/quantum.hpp"
#include "support/fixtures.hpp"

using namespace exparc;
using namespace exparc::testing;

TEST(DensityMatrix, Validation) {
  CMatrix m = CMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{HermitianMatrix(m)}, InputError);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{HermitianMatrix(m)}, InputError);
  EXPECT_TRUE(DensityMatrix::maximally_mixed(3).faithful());
  std::mt19937_64 rng(31);
  EXPECT_FALSE(random_singular_density(4, 2, rng).faithful());
}

TEST(Purification, ReshapesToSquareRootAndReproducesState) {
  std::mt19937_64 rng(32);
  for (int n = 1; n <= 5; ++n) {
    const DensityMatrix rho = random_density(n, rng);
    const PurificationVector x = purify(rho);
    EXPECT_NEAR(x.components.norm(), 1.0, 1e-13);
    EXPECT_TRUE(x.separating);
    const CMatrix root = oracle_function(rho.matrix(), [](double l) { return std::sqrt(l); });
    EXPECT_LT(max_abs(x.reshaped() - root), 1e-12);
    for (int k = 0; k < 5; ++k) {
      const CMatrix a = random_ginibre(n, rng);
      EXPECT_LT(std::abs(vector_state(x.components, a) - (rho.matrix() * a).trace()), 1e-12);
    }
  }
  std::mt19937_64 rng2(33);
  EXPECT_FALSE(purify(random_singular_density(3, 1, rng2)).separating);
}

TEST(QuantumArc, ZetaMatchesTraceOracle) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const DensityMatrix x = random_density(n, rng);
    const DensityMatrix y = random_density(n, rng);
    const auto a = quantum_arc_weights(x, y);
    for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) {
      EXPECT_NEAR(zeta(a, t), oracle_trace_zeta(x.matrix(), y.matrix(), t), 1e-12);
    }
    const DensityMatrix r = arc_density(x, y, 0.4);
    EXPECT_NEAR(r.hermitian().trace(), 1.0, 1e-12);
  }
}

TEST(QuantumArc, EndpointsAndSingularTarget) {
  std::mt19937_64 rng(35);
  const DensityMatrix x = random_density(4, rng);
  const DensityMatrix y = random_singular_density(4, 2, rng);
  EXPECT_LT(max_abs(arc_density(x, y, 0.0).matrix() - x.matrix()), 1e-12);
  EXPECT_LT(max_abs(arc_density(x, y, 1.0).matrix() - y.matrix()), 1e-10);
  EXPECT_TRUE(quantum_arc_weights(x, y).has_kernel());
  EXPECT_THROW(arc_density_derivative(x, y, 0.0), DivergentDerivativeError);
  EXPECT_NO_THROW(arc_density_derivative(x, y, 0.5));
  EXPECT_THROW(arc_density(y, x, 0.5), FaithfulnessError);
  EXPECT_THROW(arc_density(x, x, 1.5), DomainError);
  EXPECT_THROW(arc_density(x, DensityMatrix::maximally_mixed(3), 0.5), InputError);
}

TEST(QuantumArc, DerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const DensityMatrix x = random_density(n, rng);
    const DensityMatrix y = random_density(n, rng);
    const HermitianMatrix a = random_hermitian(n, rng);
    for (double t : {0.3, 0.6}) {
      const HermitianMatrix d = arc_density_derivative(x, y, t);
      EXPECT_LT(std::abs(d.trace()), 1e-10);
      const auto c = observed_order(
          [&](double s) { return (arc_density(x, y, s).matrix() * a.matrix()).trace().real(); },
          state_tangent(x, y, t, a), t);
      EXPECT_LT(c.err_fine, 1e-7);
      if (c.measurable) EXPECT_GE(c.order, 1.9);
    }
  }
}

TEST(QuantumArc, CommutingPairsReduceToClassical) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 6;
    const CMatrix u = random_unitary(n, rng);
    const auto ps = random_simplex(n, rng);
    const auto qs = random_simplex(n, rng);
    const DensityMatrix x = density_in_basis(u, ps);
    const DensityMatrix y = density_in_basis(u, qs);
    const ProbabilityVector p(ps), q(qs);
    for (double t : {0.0, 0.25, 0.5, 1.0}) {
      std::vector<double> want = arc_point(p, q, t).weights();
      std::sort(want.begin(), want.end());
      const RVector got = eigh(arc_density(x, y, t).hermitian()).eigenvalues;
      for (int i = 0; i < n; ++i) EXPECT_NEAR(got(i), want[i], 1e-10);
      EXPECT_LT(trace_distance(arc_density(x, y, t).matrix(), log_geodesic(x, y, t).matrix()),
                1e-9);
    }
    EXPECT_NEAR(zeta(quantum_arc_weights(x, y), 0.5), zeta(radon_nikodym(p, q), 0.5), 1e-12);
  }
}

TEST(QuantumArc, NonCommutingDiffersFromLogGeodesic) {
  std::mt19937_64 rng(38);
  const DensityMatrix x = random_density(3, rng);
  const DensityMatrix y = random_density(3, rng);
  ASSERT_GT(frobenius_norm(commutator(x.matrix(), y.matrix())), 1e-6);
  double worst = 0.0;
  for (int k = 1; k < 10; ++k) {
    const double t = k / 10.0;
    worst = std::max(worst, trace_distance(arc_density(x, y, t).matrix(),
                                           log_geodesic(x, y, t).matrix()));
  }
  EXPECT_GT(worst, 1e-8);
}

TEST(QuantumArc, InversionSymmetry) {
  std::mt19937_64 rng(39);
  const DensityMatrix x = random_density(4, rng);
  const DensityMatrix y = random_density(4, rng);
  for (double t : {0.2, 0.5, 0.7}) {
    EXPECT_LT(max_abs(arc_density(x, y, t).matrix() - arc_density(y, x, 1.0 - t).matrix()), 1e-9);
    EXPECT_NEAR(zeta(invert(quantum_arc_weights(x, y)), t),
                zeta(quantum_arc_weights(y, x), t), 1e-11);
  }
}
