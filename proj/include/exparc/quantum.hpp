#pragma once

// Density-matrix states of the full n x n matrix algebra.
//
// Every quantity is computed through R = rho_x^{-1/2} rho_y rho_x^{-1/2},
// which is unitarily equivalent to the commutant Radon-Nikodym operator on the
// purification; standard_form.hpp rebuilds the n^2-dimensional picture when an
// independent check is needed.

#include "exparc/arc.hpp"
#include "exparc/spectral.hpp"

namespace exparc {

class DensityMatrix {
 public:
  /// PSD within 1e-10 (relative to the largest eigenvalue) and unit trace
  /// within 1e-12.
  explicit DensityMatrix(HermitianMatrix m);

  static DensityMatrix maximally_mixed(int n);

  int dim() const noexcept { return m_.dim(); }
  const HermitianMatrix& hermitian() const noexcept { return m_; }
  const CMatrix& matrix() const noexcept { return m_.matrix(); }
  /// All eigenvalues strictly positive under the given policy.
  bool faithful(const SupportPolicy& policy = {}) const;

 private:
  HermitianMatrix m_;
};

/// x = sum_i sqrt(p_i) e_i (x) e_i in C^n (x) C^n, with (e_i) the canonical
/// eigenbasis of rho (row-major pair index i*n + j).
struct PurificationVector {
  int n = 0;
  CVector components;
  /// Eigenvectors e_i (columns) used to build the vector.
  CMatrix eigenbasis;
  /// rho strictly positive; then x is cyclic and separating.
  bool separating = false;

  /// The vector reshaped in the recorded basis: the n x n matrix M with
  /// v = sum_{ij} (e_i^* M e_j) e_i (x) e_j. For the purification itself
  /// M = rho^{1/2}.
  CMatrix reshaped() const;
  /// Reshapes any vector of the same ambient space in this basis.
  CMatrix reshape(const CVector& v) const;
};

PurificationVector purify(const DensityMatrix& rho);

/// omega_x(A (x) I) = (x, (A (x) I) x) for a vector in C^{n^2}.
Complex vector_state(const CVector& x, const CMatrix& a);

/// Points (lambda_k, Tr(rho_x P_k)) from the eigendecomposition of R.
ArcSpectralWeights quantum_arc_weights(const DensityMatrix& rho_x, const DensityMatrix& rho_y,
                                       const SupportPolicy& policy = {});

/// rho_t = e^{-2 zeta(t)} rho_x^{1/2} R^t rho_x^{1/2}.
DensityMatrix arc_density(const DensityMatrix& rho_x, const DensityMatrix& rho_y, double t,
                          const SupportPolicy& policy = {});

/// d/dt rho_t = e^{-2 zeta} rho_x^{1/2} R^t (log R - 2 zeta'(t)) rho_x^{1/2}.
/// At t = 0 R must have full support.
HermitianMatrix arc_density_derivative(const DensityMatrix& rho_x, const DensityMatrix& rho_y,
                                       double t, const SupportPolicy& policy = {});

/// Tr(d/dt rho_t A).
double state_tangent(const DensityMatrix& rho_x, const DensityMatrix& rho_y, double t,
                     const HermitianMatrix& a, const SupportPolicy& policy = {});

/// exp((1-t) log rho_x + t log rho_y), normalized to unit trace.
DensityMatrix log_geodesic(const DensityMatrix& rho_x, const DensityMatrix& rho_y, double t,
                           const SupportPolicy& policy = {});

/// 1/2 || a - b ||_1.
double trace_distance(const CMatrix& a, const CMatrix& b);

}  // namespace exparc
