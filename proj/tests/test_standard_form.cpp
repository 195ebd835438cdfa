#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "exparc/errors.hpp"
#include "exparc/standard_form.hpp"
#include "support/fixtures.hpp"

using namespace exparc;
using namespace exparc::testing;

namespace {

// Row-major vec, written out independently of the library.
CVector flatten(const CMatrix& m) {
  const auto n = m.rows();
  CVector v(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = m(i, j);
  return v;
}

CMatrix positive_matrix(int n, std::mt19937_64& rng) {
  const CMatrix g = random_ginibre(n, rng);
  return g * g.adjoint();
}

}  // namespace

TEST(StandardForm, ModularObjectsForPurification) {
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 4; ++n) {
    const DensityMatrix rho = random_density(n, rng);
    const StandardRep rep = build_standard_rep(rho);
    const CMatrix rho_inv = rho.matrix().inverse();
    const CMatrix expected = kron(rho.matrix(), rho_inv);
    EXPECT_LT(max_abs(rep.Delta.matrix() - expected), 1e-10) << "n=" << n;
    const int d = n * n;
    EXPECT_LT(max_abs(rep.J.compose(rep.J) - CMatrix::Identity(d, d)), 1e-10);
    const CMatrix delta_half = matrix_power(rep.deltaSpectrum, 0.5).matrix();
    EXPECT_LT(max_abs(rep.S.matrix - rep.J.matrix * delta_half.conjugate()), 1e-10);
    // S (A x) = A^* x.
    for (int k = 0; k < 5; ++k) {
      const CMatrix a = random_ginibre(n, rng);
      const CVector lhs = rep.S.apply(rep.left(a) * rep.x);
      EXPECT_LT((lhs - rep.left(a.adjoint()) * rep.x).cwiseAbs().maxCoeff(), 1e-10);
    }
    EXPECT_LT((rep.J.apply(rep.x) - rep.x).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(StandardForm, DiagonalReferenceState) {
  // For the purification sum_i sqrt(p_i) e_i (x) e_i in the standard basis,
  // Delta is the literal Kronecker product with rho^{-1} (not its transpose)
  // when rho is real symmetric.
  std::mt19937_64 rng(42);
  RVector p(3);
  p << 0.5, 0.3, 0.2;
  const DensityMatrix rho(HermitianMatrix::diagonal(p));
  const StandardRep rep = build_standard_rep(rho);
  EXPECT_LT(max_abs(rep.Delta.matrix() - kron(rho.matrix(), rho.matrix().inverse())), 1e-12);
}

TEST(StandardForm, ModularFlowGroupLawAndInvariance) {
  std::mt19937_64 rng(43);
  const DensityMatrix rho = random_density(3, rng);
  const StandardRep rep = build_standard_rep(rho);
  const CMatrix a = random_ginibre(3, rng);
  const ModularFlow f1 = modular_flow(rep, 0.3, a);
  const ModularFlow f12 = modular_flow(rep, -0.8, f1.factor);
  const ModularFlow f3 = modular_flow(rep, -0.5, a);
  EXPECT_LT(f1.residual, 1e-9);
  EXPECT_LT(max_abs(f12.factor - f3.factor), 1e-9);
  EXPECT_LT(std::abs(vector_state(rep.x, f1.factor) - vector_state(rep.x, a)), 1e-9);
  // tau_t(A) = rho^{it} A rho^{-it}.
  const SpectralDecomposition s = eigh(rho.hermitian());
  const CMatrix u = unitary_power(s, 0.3);
  EXPECT_LT(max_abs(f1.factor - u * a * u.adjoint()), 1e-9);
}

TEST(StandardForm, GeneralVectorBuildsSameModularStructure) {
  std::mt19937_64 rng(44);
  const int n = 3;
  const CMatrix g = random_ginibre(n, rng);
  CVector x = flatten(g);
  x /= x.norm();
  const StandardRep rep = build_standard_rep(x);
  const CMatrix rho = rep.rho;
  EXPECT_LT(max_abs(rho - oracle_function(rho, [](double l) { return l; })), 1e-12);
  for (int k = 0; k < 4; ++k) {
    const CMatrix a = random_ginibre(n, rng);
    EXPECT_LT((rep.S.apply(rep.left(a) * x) - rep.left(a.adjoint()) * x).cwiseAbs().maxCoeff(),
              1e-9);
  }
  const int d = n * n;
  EXPECT_LT(max_abs(rep.J.compose(rep.J) - CMatrix::Identity(d, d)), 1e-9);
  EXPECT_LT(max_abs(rep.to_frame(x) - rep.sqrt_rho()), 1e-10);
  CVector bad = CVector::Zero(d);
  bad(0) = 1.0;
  EXPECT_THROW(build_standard_rep(bad), FaithfulnessError);
  EXPECT_THROW(build_standard_rep(CVector::Ones(5)), InputError);
}

TEST(StandardForm, CyclicSeparating) {
  std::mt19937_64 rng(45);
  const auto good = is_cyclic_separating(3, flatten(random_ginibre(3, rng)));
  EXPECT_TRUE(good.cyclic);
  EXPECT_TRUE(good.separating);
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 1.0;
  const auto bad = is_cyclic_separating(3, flatten(m));
  EXPECT_FALSE(bad.cyclic);
  EXPECT_FALSE(bad.separating);
}

TEST(StandardForm, RadonNikodymSpectrumMatchesRelativeOperator) {
  std::mt19937_64 rng(46);
  for (int n = 2; n <= 4; ++n) {
    const DensityMatrix x = random_density(n, rng);
    const DensityMatrix y = random_density(n, rng);
    const StandardRep rep = build_standard_rep(x);
    const CVector yv = cone_representative(rep, y);
    EXPECT_TRUE(cone_membership(rep, yv, ConeTag::C_x).member);
    // The vector state of y reproduces rho_y.
    for (int k = 0; k < 3; ++k) {
      const CMatrix a = random_ginibre(n, rng);
      EXPECT_LT(std::abs(vector_state(yv, a) - (y.matrix() * a).trace()), 1e-10);
    }
    const HermitianMatrix big = commutant_radon_nikodym(rep, yv);
    // y = X^{1/2} x and (y, A y) = (x, A X x).
    const CMatrix root = matrix_power(eigh(big), 0.5).matrix();
    EXPECT_LT((root * rep.x - yv).cwiseAbs().maxCoeff(), 1e-9);
    const RVector rel = eigh(relative_operator(x.hermitian(), y.hermitian())).eigenvalues;
    const RVector full = eigh(big).eigenvalues;
    // Each eigenvalue of R appears n times in X.
    for (int k = 0; k < n * n; ++k) EXPECT_NEAR(full(k), rel(k / n), 1e-9);
    const auto a1 = standard_arc_weights(rep, yv);
    const auto a2 = quantum_arc_weights(x, y);
    for (double t : {0.2, 0.5, 0.8}) EXPECT_NEAR(zeta(a1, t), zeta(a2, t), 1e-10);
    // Hilbert arc states agree with arc_density.
    const CVector yt = hilbert_arc(rep, yv, 0.4);
    const DensityMatrix rt = arc_density(x, y, 0.4);
    const CMatrix a = random_hermitian(n, rng).matrix();
    EXPECT_NEAR(vector_state(yt, a).real(), (rt.matrix() * a).trace().real(), 1e-9);
    EXPECT_NEAR(standard_state_tangent(rep, yv, 0.4, a),
                state_tangent(x, y, 0.4, HermitianMatrix(a)), 1e-8);
  }
}

TEST(StandardForm, CommutantRadonNikodymFixedBySharp) {
  // S^* y = y for y in C_x: the identity S^T conj(y) = y.
  std::mt19937_64 rng(47);
  const DensityMatrix x = random_density(3, rng);
  const StandardRep rep = build_standard_rep(x);
  const CVector y = cone_representative(rep, random_density(3, rng));
  EXPECT_LT((rep.S.adjoint().apply(y) - y).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Cones, ExactTestsAgreeWithSampling) {
  std::mt19937_64 rng(48);
  const int n = 3;
  const DensityMatrix rho = random_density(n, rng);
  const StandardRep rep = build_standard_rep(rho);
  const CMatrix k = positive_matrix(n, rng);
  // (I (x) B) x with B positive lies in C_x, (A (x) I) x in the dual cone.
  const CVector in_cx = rep.commutant(rep.commutant_factor_from_frame(k)) * rep.x;
  const CVector in_dual = rep.left(k) * rep.x;
  const CVector natural = rep.left(k) * rep.J.apply(rep.left(k) * rep.x);
  const CVector generic = flatten(random_ginibre(n, rng));

  struct Case {
    CVector v;
    ConeTag cone;
    bool member;
  };
  const std::vector<Case> cases = {
      {in_cx, ConeTag::C_x, true},         {in_dual, ConeTag::C_x_dual, true},
      {natural, ConeTag::Natural, true},   {generic, ConeTag::C_x, false},
      {generic, ConeTag::C_x_dual, false}, {generic, ConeTag::Natural, false},
      {-in_cx, ConeTag::C_x, false},       {rep.x, ConeTag::Natural, true},
  };
  for (const auto& c : cases) {
    const ConeCertificate cert = cone_membership(rep, c.v, c.cone);
    EXPECT_EQ(cert.member, c.member) << to_string(c.cone);
    std::mt19937_64 srng(7);
    const SampledCone s = cone_membership_sampled(rep, c.v, c.cone, srng, 400);
    EXPECT_EQ(s.member, c.member) << to_string(c.cone);
    if (!cert.member) {
      EXPECT_FALSE(cert.reason.empty());
      EXPECT_TRUE(cert.witnessPairing.real() < -1e-10 || std::abs(cert.witnessPairing.imag()) > 1e-10);
    }
  }
}

TEST(Cones, DualityOnSamples) {
  std::mt19937_64 rng(49);
  const int n = 2;
  const StandardRep rep = build_standard_rep(random_density(n, rng));
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const CVector u = rep.commutant(positive_matrix(n, rng)) * rep.x;
    const CVector w = rep.left(positive_matrix(n, rng)) * rep.x;
    const Complex pair = w.dot(u);
    worst = std::min(worst, pair.real());
    EXPECT_LT(std::abs(pair.imag()), 1e-10);
  }
  EXPECT_GE(worst, -1e-10);
}
