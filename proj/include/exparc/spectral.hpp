#pragma once

// Hermitian eigendecomposition and functional calculus with an explicit
// policy for numerically zero eigenvalues.

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace exparc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Complex Hermitian matrix. The input is symmetrized on construction, so the
/// stored entries are exactly Hermitian; inputs that are visibly non-Hermitian
/// (relative asymmetry above 1e-8) are rejected with InputError.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m);

  static HermitianMatrix identity(int n);
  static HermitianMatrix zero(int n);
  static HermitianMatrix diagonal(const RVector& d);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }

 private:
  CMatrix m_;
};

/// Eigenvalues in ascending order and orthonormal eigenvectors (columns).
///
/// Eigenvectors are canonical: inside a cluster of equal eigenvalues the basis
/// is rebuilt from the cluster projector by pivoted Gram-Schmidt on the
/// standard basis, and every vector is rotated so that its first component
/// with modulus above 1e-8 is real and positive.
struct SpectralDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;
  int sourceDim = 0;

  /// V diag(f(lambda)) V*.
  CMatrix apply(const std::function<Complex(double)>& f) const;
  double max_abs_eigenvalue() const;
};

/// How eigenvalues near zero are treated by the functional calculus.
///
/// A threshold thr = relTol * max|lambda| is computed per matrix.
///  - ClipToZero: eigenvalues in [-thr, thr] become exactly 0; eigenvalues
///    below -thr are a DomainError.
///  - Reject: nothing is clipped; any negative eigenvalue is a DomainError and
///    eigenvalues in (0, thr] count as nonzero.
struct SupportPolicy {
  enum class Mode { ClipToZero, Reject };

  double relTol = 1e-12;
  Mode mode = Mode::ClipToZero;

  SupportPolicy() = default;
  SupportPolicy(double tol, Mode m);
};

SpectralDecomposition eigh(const HermitianMatrix& h);

/// Eigenvalues after the support policy has been applied (clipped to 0 where
/// appropriate). Throws DomainError for a negative eigenvalue beyond tolerance.
RVector nonnegative_spectrum(const SpectralDecomposition& s,
                             const SupportPolicy& policy);

/// S^t. t = 0 gives the identity (0^0 = 1); t < 0 is the pseudo-power on the
/// support, with 0 on the kernel.
HermitianMatrix matrix_power(const SpectralDecomposition& s, double t,
                             const SupportPolicy& policy = {});

/// Logarithm; every eigenvalue must be strictly positive after clipping.
HermitianMatrix matrix_log(const SpectralDecomposition& s,
                           const SupportPolicy& policy = {});

/// Logarithm on the support, 0 on the kernel.
HermitianMatrix matrix_log_on_support(const SpectralDecomposition& s,
                                      const SupportPolicy& policy = {});

HermitianMatrix matrix_exp(const HermitianMatrix& h);

/// exp(i t log S) on a strictly positive S (e.g. Delta^{it}).
CMatrix unitary_power(const SpectralDecomposition& s, double t,
                      const SupportPolicy& policy = {});

/// rho_x^{-1/2} rho_y rho_x^{-1/2}. rho_x must be strictly positive.
HermitianMatrix relative_operator(const HermitianMatrix& rho_x,
                                  const HermitianMatrix& rho_y,
                                  const SupportPolicy& policy = {});

// Norms and small helpers.
double frobenius_norm(const CMatrix& m);
double operator_norm(const CMatrix& m);
/// Sum of singular values.
double trace_norm(const CMatrix& m);
CMatrix commutator(const CMatrix& a, const CMatrix& b);
/// Kronecker product a (x) b with row-major pair indexing (i*n + j).
CMatrix kron(const CMatrix& a, const CMatrix& b);

}  // namespace exparc
