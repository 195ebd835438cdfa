#include "exparc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "exparc/errors.hpp"

namespace exparc {

namespace {

// Relative spread under which neighbouring eigenvalues form one cluster.
constexpr double kClusterTol = 1e-12;
// Smallest modulus a component needs to carry the phase convention.
constexpr double kPhaseTol = 1e-8;

void fix_phase(Eigen::Ref<CVector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > kPhaseTol) {
      v *= std::conj(v(i)) / a;
      v(i) = Complex(v(i).real(), 0.0);
      return;
    }
  }
}

// Replaces the columns [first, first+count) of `vecs` by a canonical basis of
// the subspace they span.
void canonicalize_cluster(CMatrix& vecs, Eigen::Index first, Eigen::Index count) {
  const Eigen::Index n = vecs.rows();
  const CMatrix block = vecs.middleCols(first, count);
  CMatrix residual = block * block.adjoint();
  for (Eigen::Index k = 0; k < count; ++k) {
    Eigen::Index best = 0;
    double best_norm = -1.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      const double nrm = residual.col(c).norm();
      if (nrm > best_norm * (1.0 + 1e-10)) {
        best = c;
        best_norm = nrm;
      }
    }
    CVector v = residual.col(best) / best_norm;
    residual -= v * (v.adjoint() * residual);
    vecs.col(first + k) = v;
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InputError("HermitianMatrix: expected a non-empty square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw InputError("HermitianMatrix: non-finite entry");
  }
  const double asym = (m - m.adjoint()).norm();
  if (asym > 1e-8 * std::max(1.0, m.norm())) {
    std::ostringstream os;
    os << "HermitianMatrix: input is not Hermitian (||M - M*||_F = " << asym << ")";
    throw InputError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return HermitianMatrix(CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(int n) {
  return HermitianMatrix(CMatrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& d) {
  return HermitianMatrix(CMatrix(d.cast<Complex>().asDiagonal()));
}

SupportPolicy::SupportPolicy(double tol, Mode m) : relTol(tol), mode(m) {
  if (!(tol > 0.0)) {
    throw InputError("SupportPolicy: relTol must be positive");
  }
}

CMatrix SpectralDecomposition::apply(const std::function<Complex(double)>& f) const {
  CVector d(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    d(i) = f(eigenvalues(i));
  }
  return eigenvectors * d.asDiagonal() * eigenvectors.adjoint();
}

double SpectralDecomposition::max_abs_eigenvalue() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

SpectralDecomposition eigh(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigh: eigensolver did not converge (dim " << h.dim()
       << ", ||H||_F = " << h.matrix().norm() << ")";
    throw ConvergenceError(os.str());
  }
  SpectralDecomposition s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  s.sourceDim = h.dim();

  const Eigen::Index n = s.eigenvalues.size();
  const double scale = std::max(s.max_abs_eigenvalue(), 1e-300);
  Eigen::Index first = 0;
  while (first < n) {
    Eigen::Index last = first + 1;
    while (last < n &&
           s.eigenvalues(last) - s.eigenvalues(last - 1) <= kClusterTol * scale) {
      ++last;
    }
    if (last - first > 1) {
      canonicalize_cluster(s.eigenvectors, first, last - first);
    }
    first = last;
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    fix_phase(s.eigenvectors.col(c));
  }
  return s;
}

RVector nonnegative_spectrum(const SpectralDecomposition& s,
                             const SupportPolicy& policy) {
  const double thr = policy.relTol * s.max_abs_eigenvalue();
  RVector out = s.eigenvalues;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double l = out(i);
    const bool negative = policy.mode == SupportPolicy::Mode::ClipToZero ? l < -thr : l < 0.0;
    if (negative) {
      std::ostringstream os;
      os << "negative eigenvalue " << l << " at index " << i
         << " exceeds the support tolerance " << thr;
      throw DomainError(os.str());
    }
    if (policy.mode == SupportPolicy::Mode::ClipToZero && l <= thr) {
      out(i) = 0.0;
    }
  }
  return out;
}

HermitianMatrix matrix_power(const SpectralDecomposition& s, double t,
                             const SupportPolicy& policy) {
  SpectralDecomposition clipped = s;
  clipped.eigenvalues = nonnegative_spectrum(s, policy);
  return HermitianMatrix(clipped.apply([t](double l) -> Complex {
    if (t == 0.0) return 1.0;
    if (l == 0.0) return 0.0;
    return std::pow(l, t);
  }));
}

HermitianMatrix matrix_log(const SpectralDecomposition& s, const SupportPolicy& policy) {
  SpectralDecomposition clipped = s;
  clipped.eigenvalues = nonnegative_spectrum(s, policy);
  for (Eigen::Index i = 0; i < clipped.eigenvalues.size(); ++i) {
    if (clipped.eigenvalues(i) == 0.0) {
      throw SingularSupportError(
          "matrix_log: zero eigenvalue at index " + std::to_string(i) +
              " (restrict to the support first)",
          static_cast<int>(i));
    }
  }
  return HermitianMatrix(clipped.apply([](double l) -> Complex { return std::log(l); }));
}

HermitianMatrix matrix_log_on_support(const SpectralDecomposition& s,
                                      const SupportPolicy& policy) {
  SpectralDecomposition clipped = s;
  clipped.eigenvalues = nonnegative_spectrum(s, policy);
  return HermitianMatrix(clipped.apply(
      [](double l) -> Complex { return l == 0.0 ? 0.0 : std::log(l); }));
}

HermitianMatrix matrix_exp(const HermitianMatrix& h) {
  return HermitianMatrix(eigh(h).apply([](double l) -> Complex { return std::exp(l); }));
}

CMatrix unitary_power(const SpectralDecomposition& s, double t, const SupportPolicy& policy) {
  SpectralDecomposition clipped = s;
  clipped.eigenvalues = nonnegative_spectrum(s, policy);
  for (Eigen::Index i = 0; i < clipped.eigenvalues.size(); ++i) {
    if (clipped.eigenvalues(i) == 0.0) {
      throw SingularSupportError("unitary_power: zero eigenvalue at index " + std::to_string(i),
                                 static_cast<int>(i));
    }
  }
  return clipped.apply([t](double l) { return std::exp(Complex(0.0, t * std::log(l))); });
}

HermitianMatrix relative_operator(const HermitianMatrix& rho_x, const HermitianMatrix& rho_y,
                                  const SupportPolicy& policy) {
  if (rho_x.dim() != rho_y.dim()) {
    throw InputError("relative_operator: dimension mismatch");
  }
  const SpectralDecomposition sx = eigh(rho_x);
  const RVector lx = nonnegative_spectrum(sx, policy);
  for (Eigen::Index i = 0; i < lx.size(); ++i) {
    if (lx(i) == 0.0) {
      std::ostringstream os;
      os << "relative_operator: reference state is not faithful (eigenvalue "
         << sx.eigenvalues(i) << " at index " << i << " is numerically zero)";
      throw FaithfulnessError(os.str());
    }
  }
  const CMatrix inv_sqrt = matrix_power(sx, -0.5, policy).matrix();
  return HermitianMatrix(inv_sqrt * rho_y.matrix() * inv_sqrt);
}

double frobenius_norm(const CMatrix& m) { return m.norm(); }

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace exparc
