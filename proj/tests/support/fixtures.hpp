#pragma once

// Random fixtures and independent oracles shared by the test binaries. The
// oracles use Eigen directly (never the library's functional calculus) so
// that they stay independent of the code they check.

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "exparc/arc.hpp"
#include "exparc/classical.hpp"
#include "exparc/quantum.hpp"

namespace exparc::testing {

inline CMatrix random_ginibre(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline HermitianMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const CMatrix g = random_ginibre(n, rng);
  return HermitianMatrix(0.5 * (g + g.adjoint()));
}

/// Strictly positive density matrix (Ginibre ensemble, shifted away from the
/// boundary so that condition numbers stay moderate).
inline DensityMatrix random_density(int n, std::mt19937_64& rng, double floor = 0.05) {
  const CMatrix g = random_ginibre(n, rng);
  CMatrix w = g * g.adjoint();
  w /= w.trace().real();
  w = (1.0 - floor) * w + floor * CMatrix::Identity(n, n) / static_cast<double>(n);
  return DensityMatrix(HermitianMatrix(w));
}

/// Density matrix of rank `rank` < n.
inline DensityMatrix random_singular_density(int n, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix b(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) b(i, j) = Complex(g(rng), g(rng));
  CMatrix w = b * b.adjoint();
  w /= w.trace().real();
  return DensityMatrix(HermitianMatrix(w));
}

/// Density matrix diagonal in a given unitary basis.
inline DensityMatrix density_in_basis(const CMatrix& u, const std::vector<double>& p) {
  RVector d(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) d(static_cast<Eigen::Index>(i)) = p[i];
  return DensityMatrix(HermitianMatrix(u * d.cast<Complex>().asDiagonal() * u.adjoint()));
}

inline CMatrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_ginibre(n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

inline std::vector<double> random_simplex(int n, std::mt19937_64& rng, double zero_prob = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& v : p) {
    v = u(rng) < zero_prob ? 0.0 : e(rng) + 1e-3;
    total += v;
  }
  if (total == 0.0) {
    p[0] = 1.0;
    total = 1.0;
  }
  for (auto& v : p) v /= total;
  return p;
}

inline ProbabilityVector random_probability(int n, std::mt19937_64& rng, double zero_prob = 0.0) {
  return ProbabilityVector(random_simplex(n, rng, zero_prob));
}

/// Arc weights built the same way a classical pair would produce them.
inline ArcSpectralWeights random_arc(int n, std::mt19937_64& rng, double zero_prob = 0.0) {
  const auto p = random_simplex(n, rng);
  const auto q = random_simplex(n, rng, zero_prob);
  std::vector<ArcPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back({q[i] / p[i], p[i]});
  return ArcSpectralWeights(pts);
}

// ---------------------------------------------------------------- oracles

/// 1/2 log sum w lambda^t by plain summation with std::pow (0^0 = 1).
inline double scalar_zeta(const std::vector<ArcPoint>& pts, double t) {
  double z = 0.0;
  for (const auto& p : pts) z += p.weight * (t == 0.0 ? 1.0 : std::pow(p.lambda, t));
  return 0.5 * std::log(z);
}

inline double central_difference(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// Observed order log10(e(h1)/e(h2)) / log10(h1/h2) of a central difference.
struct ConvergenceOrder {
  double err_coarse = 0.0;
  double err_fine = 0.0;
  double order = 0.0;
  /// False when the coarse error is so small that roundoff at the fine step
  /// (about eps / h) dominates and the order is meaningless.
  bool measurable = true;
};

inline ConvergenceOrder observed_order(const std::function<double(double)>& f,
                                       double exact_derivative, double t, double h_coarse = 1e-3,
                                       double h_fine = 1e-4) {
  ConvergenceOrder c;
  c.err_coarse = std::abs(central_difference(f, t, h_coarse) - exact_derivative);
  c.err_fine = std::abs(central_difference(f, t, h_fine) - exact_derivative);
  c.order = std::log10(c.err_coarse / c.err_fine) / std::log10(h_coarse / h_fine);
  const double scale = std::max(1.0, std::abs(f(t)));
  c.measurable = c.err_coarse > 1e3 * std::numeric_limits<double>::epsilon() * scale / h_fine;
  return c;
}

/// Hermitian matrix function through Eigen's own solver.
inline CMatrix oracle_function(const CMatrix& h, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  RVector d = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * d.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

/// rho_x^{-1/2} rho_y rho_x^{-1/2} via Eigen's operatorInverseSqrt.
inline CMatrix oracle_relative(const CMatrix& rho_x, const CMatrix& rho_y) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_x);
  const CMatrix inv_sqrt = es.operatorInverseSqrt();
  return inv_sqrt * rho_y * inv_sqrt;
}

/// 1/2 log Tr rho_x R^t with R^t by direct eigendecomposition. Eigenvalues
/// of R up to 1e-12 times the largest count as exact zeros.
inline double oracle_trace_zeta(const CMatrix& rho_x, const CMatrix& rho_y, double t) {
  const CMatrix r = oracle_relative(rho_x, rho_y);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (r + r.adjoint()));
  const double cut = 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff();
  const CMatrix rt = oracle_function(r, [t, cut](double l) {
    if (t == 0.0) return 1.0;
    return l <= cut ? 0.0 : std::pow(l, t);
  });
  return 0.5 * std::log((rho_x * rt).trace().real());
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace exparc::testing
