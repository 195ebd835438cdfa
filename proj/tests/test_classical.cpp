#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "exparc/classical.hpp"
#include "exparc/errors.hpp"
#include "support/fixtures.hpp"

using namespace exparc;
using namespace exparc::testing;

namespace {

ProbabilityVector p_half() { return ProbabilityVector({0.5, 0.5}); }
ProbabilityVector q_skew() { return ProbabilityVector({0.9, 0.1}); }

// Scalar reference for r_t = p^{1-t} q^t / sum.
std::vector<double> oracle_point(const ProbabilityVector& p, const ProbabilityVector& q, double t) {
  std::vector<double> r(p.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i] = std::pow(p[i], 1.0 - t) * std::pow(q[i], t);
    z += r[i] * p.quadrature()[i];
  }
  for (auto& v : r) v /= z;
  return r;
}

}  // namespace

TEST(ProbabilityVector, Validation) {
  EXPECT_THROW(ProbabilityVector({0.5, 0.6}), InputError);
  EXPECT_THROW(ProbabilityVector({1.5, -0.5}), InputError);
  EXPECT_THROW(ProbabilityVector({1.0}, {0.0}), InputError);
  EXPECT_THROW(ProbabilityVector({1.0, 0.0}, {1.0}), InputError);
  EXPECT_NO_THROW(ProbabilityVector({2.0, 2.0}, {0.25, 0.25}));
  EXPECT_FALSE(ProbabilityVector({1.0, 0.0}).faithful());
}

TEST(Classical, FrozenExample) {
  const auto p = p_half();
  const auto q = q_skew();
  const auto a = radon_nikodym(p, q);
  EXPECT_NEAR(zeta(a, 0.5), -0.0557858878285524, 1e-14);
  EXPECT_NEAR(zeta_prime(a, 0.0), -0.255412811882995, 1e-14);
  EXPECT_NEAR(kl_divergence(p, q), 0.510825623765991, 1e-14);
  const auto mid = arc_point(p, q, 0.5);
  EXPECT_NEAR(mid[0], 0.75, 1e-15);
  EXPECT_NEAR(mid[1], 0.25, 1e-15);
  const auto h = tangent_generator(p, q);
  EXPECT_NEAR(h.values[0], 0.587786664902119, 1e-14);
  EXPECT_NEAR(h.values[1], -1.60943791243410, 1e-14);
  EXPECT_NEAR(classical_state_tangent(p, q, 0.5, {{1.0, 0.0}}), 0.411979608250541, 1e-14);
}

TEST(Classical, ArcPointMatchesOracleWithQuadrature) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial;
    std::vector<double> h(n), pw(n), qw(n);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    const auto ps = random_simplex(n, rng);
    const auto qs = random_simplex(n, rng);
    for (int i = 0; i < n; ++i) {
      h[i] = u(rng);
      pw[i] = ps[i] / h[i];
      qw[i] = qs[i] / h[i];
    }
    const ProbabilityVector p(pw, h), q(qw, h);
    for (double t : {0.0, 0.3, 0.5, 1.0}) {
      const auto r = arc_point(p, q, t);
      const auto want = oracle_point(p, q, t);
      for (int i = 0; i < n; ++i) EXPECT_NEAR(r[i], want[i], 1e-12 * std::max(1.0, want[i]));
    }
    EXPECT_NEAR(zeta(radon_nikodym(p, q), 0.0), 0.0, 1e-15);
    EXPECT_NEAR(zeta(radon_nikodym(p, q), 1.0), 0.0, 1e-12);
  }
}

TEST(Classical, TangentMatchesFiniteDifferences) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_probability(8, rng);
    const auto q = random_probability(8, rng);
    DiscreteObservable a;
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 8; ++i) a.values.push_back(g(rng));
    for (double t : {0.25, 0.5, 0.75}) {
      const auto c = observed_order(
          [&](double s) { return expectation(arc_point(p, q, s), a); },
          classical_state_tangent(p, q, t, a), t);
      EXPECT_LT(c.err_fine, 1e-7);
      if (c.measurable) EXPECT_GE(c.order, 1.9);
    }
  }
}

TEST(Classical, ZerosAndDiscontinuity) {
  const ProbabilityVector p({0.5, 0.5});
  const ProbabilityVector q({1.0, 0.0});
  EXPECT_FALSE(arc_continuous_at_zero(p, q));
  EXPECT_TRUE(arc_continuous_at_zero(q, p));
  const auto r0 = arc_point(p, q, 0.0);
  EXPECT_EQ(r0[1], 0.5);
  const auto r = arc_point(p, q, 1e-9);
  EXPECT_NEAR(r[0], 1.0, 1e-15);
  EXPECT_THROW(radon_nikodym(q, p), FaithfulnessError);
  EXPECT_THROW(tangent_generator(p, q), DomainError);
  EXPECT_THROW(kl_divergence(p, q), DomainError);
  EXPECT_NEAR(kl_divergence(q, p), std::log(2.0), 1e-15);
  EXPECT_NO_THROW(classical_state_tangent(p, q, 0.5, {{1.0, 0.0}}));
}

TEST(Classical, InversionSymmetry) {
  std::mt19937_64 rng(23);
  const auto p = random_probability(10, rng);
  const auto q = random_probability(10, rng);
  for (double t : {0.1, 0.4, 0.9}) {
    const auto a = arc_point(p, q, t);
    const auto b = arc_point(q, p, 1.0 - t);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  }
  EXPECT_NEAR(zeta(invert(radon_nikodym(p, q)), 0.3), zeta(radon_nikodym(q, p), 0.3), 1e-13);
}
