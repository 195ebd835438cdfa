#include "exparc/standard_form.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "exparc/errors.hpp"

namespace exparc {

namespace {

// Delta has eigenvalues p_i / p_j; keep the clipping threshold far below the
// smallest ratio a well-posed input can produce.
const SupportPolicy kDeltaPolicy{1e-15, SupportPolicy::Mode::ClipToZero};

CMatrix unvec(const CVector& v, int n) {
  CMatrix m(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) m(a, b) = v(a * n + b);
  }
  return m;
}

CVector vec(const CMatrix& m) {
  const int n = static_cast<int>(m.rows());
  CVector v(static_cast<Eigen::Index>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) v(a * n + b) = m(a, b);
  }
  return v;
}

int ambient_root(Eigen::Index size) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(size))));
  if (n <= 0 || static_cast<Eigen::Index>(n) * n != size) {
    throw InputError("standard form: vector length " + std::to_string(size) +
                     " is not a perfect square");
  }
  return n;
}

// Inner product (u, v), linear in u.
Complex inner(const CVector& u, const CVector& v) { return v.dot(u); }

CMatrix random_ginibre(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

CVector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

// Rank-one projector on even samples, normalized Wishart on odd ones.
CMatrix random_positive(int n, int sample, std::mt19937_64& rng) {
  if (sample % 2 == 0) {
    const CVector a = random_unit(n, rng);
    return a * a.adjoint();
  }
  const CMatrix g = random_ginibre(n, rng);
  const CMatrix w = g * g.adjoint();
  return w / w.trace().real();
}

}  // namespace

CMatrix StandardRep::to_frame(const CVector& v) const { return unvec(v, n) * frame; }

CVector StandardRep::from_frame(const CMatrix& m) const { return vec(m * frame.adjoint()); }

CMatrix StandardRep::left(const CMatrix& a) const { return kron(a, CMatrix::Identity(n, n)); }

CMatrix StandardRep::commutant(const CMatrix& b) const {
  return kron(CMatrix::Identity(n, n), b);
}

CMatrix StandardRep::commutant_factor_from_frame(const CMatrix& k) const {
  return (frame * k * frame.adjoint()).transpose();
}

StandardRep build_standard_rep(const DensityMatrix& rho) {
  const PurificationVector p = purify(rho);
  if (!p.separating) {
    throw FaithfulnessError("build_standard_rep: density matrix is not strictly positive");
  }
  return build_standard_rep(p.components);
}

StandardRep build_standard_rep(const CVector& x) {
  const int n = ambient_root(x.size());
  if (std::abs(x.norm() - 1.0) > 1e-10) {
    throw InputError("build_standard_rep: vector is not normalized");
  }
  StandardRep rep;
  rep.n = n;
  rep.x = x;
  const CMatrix g = unvec(x, n);
  rep.rho = g * g.adjoint();

  const SpectralDecomposition srho = eigh(HermitianMatrix(rep.rho));
  const RVector p = nonnegative_spectrum(srho, SupportPolicy{});
  if ((p.array() <= 0.0).any()) {
    throw FaithfulnessError(
        "build_standard_rep: vector is not cyclic and separating (reduced density matrix is "
        "singular)");
  }
  rep.sqrt_rho_ = matrix_power(srho, 0.5).matrix();
  rep.inv_sqrt_rho_ = matrix_power(srho, -0.5).matrix();
  rep.frame = (rep.inv_sqrt_rho_ * g).adjoint();

  // S (E_ab x) = E_ba x on the matrix units; they span because x is cyclic.
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  CMatrix images(dim, dim);
  CMatrix targets(dim, dim);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      CMatrix ea = CMatrix::Zero(n, n);
      ea.row(a) = g.row(b);
      CMatrix eb = CMatrix::Zero(n, n);
      eb.row(b) = g.row(a);
      images.col(a * n + b) = vec(ea);
      targets.col(a * n + b) = vec(eb);
    }
  }
  // S.matrix * conj(images) = targets
  const CMatrix s_transposed =
      images.conjugate().transpose().partialPivLu().solve(targets.transpose());
  rep.S = AntilinearMap{s_transposed.transpose()};

  rep.Delta = HermitianMatrix(rep.S.adjoint().compose(rep.S));
  rep.deltaSpectrum = eigh(rep.Delta);
  const CMatrix delta_inv_sqrt = matrix_power(rep.deltaSpectrum, -0.5, kDeltaPolicy).matrix();
  rep.J = AntilinearMap{rep.S.matrix * delta_inv_sqrt.conjugate()};
  return rep;
}

ModularFlow modular_flow(const StandardRep& rep, double t, const CMatrix& a) {
  if (a.rows() != rep.n || a.cols() != rep.n) {
    throw InputError("modular_flow: operator dimension differs from the algebra");
  }
  const CMatrix u = unitary_power(rep.deltaSpectrum, t, kDeltaPolicy);
  const CMatrix op = u * rep.left(a) * u.adjoint();
  const int n = rep.n;
  ModularFlow out;
  out.factor = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k) acc += op(i * n + k, j * n + k);
      out.factor(i, j) = acc / static_cast<double>(n);
    }
  }
  out.residual = (op - rep.left(out.factor)).norm();
  return out;
}

std::string to_string(ConeTag tag) {
  switch (tag) {
    case ConeTag::C_x:
      return "C_x";
    case ConeTag::C_x_dual:
      return "C_x_dual";
    case ConeTag::Natural:
      return "natural";
  }
  return "unknown";
}

ConeCertificate cone_membership(const StandardRep& rep, const CVector& v, ConeTag cone,
                                double tol) {
  if (v.size() != rep.x.size()) {
    throw InputError("cone_membership: vector length differs from the representation");
  }
  const CMatrix m = rep.to_frame(v);
  ConeCertificate cert;
  cert.cone = cone;
  // `pairing` is N with (v, w) = Tr(N P) for the rank-one positive P that
  // generates the witness w on the pairing side.
  CMatrix pairing;
  switch (cone) {
    case ConeTag::C_x:
      cert.factor = rep.inv_sqrt_rho() * m;
      pairing = m * rep.sqrt_rho();
      break;
    case ConeTag::C_x_dual:
      cert.factor = m * rep.inv_sqrt_rho();
      pairing = rep.sqrt_rho() * m;
      break;
    case ConeTag::Natural:
      cert.factor = m;
      pairing = m;
      break;
  }
  const double scale = std::max(1.0, cert.factor.norm());
  cert.hermitianDefect = (cert.factor - cert.factor.adjoint()).norm();
  const HermitianMatrix herm(0.5 * (cert.factor + cert.factor.adjoint()));
  cert.minEigenvalue = eigh(herm).eigenvalues(0);

  CVector direction;
  if (cert.hermitianDefect > tol * scale) {
    // Pairings pick up an imaginary part along the skew-Hermitian direction.
    const HermitianMatrix skew((pairing - pairing.adjoint()) / Complex(0.0, 2.0));
    const SpectralDecomposition s = eigh(skew);
    const Eigen::Index last = s.eigenvalues.size() - 1;
    const Eigen::Index pick =
        std::abs(s.eigenvalues(0)) >= std::abs(s.eigenvalues(last)) ? 0 : last;
    direction = s.eigenvectors.col(pick);
    cert.reason = "factor is not Hermitian";
  } else if (cert.minEigenvalue < -tol * scale) {
    const SpectralDecomposition s = eigh(HermitianMatrix(0.5 * (pairing + pairing.adjoint())));
    direction = s.eigenvectors.col(0);
    std::ostringstream os;
    os << "factor has negative eigenvalue " << cert.minEigenvalue;
    cert.reason = os.str();
  } else {
    cert.member = true;
    return cert;
  }

  const CMatrix projector = direction * direction.adjoint();
  switch (cone) {
    case ConeTag::C_x:
      cert.witnessOperator = projector;
      cert.witnessVector = rep.left(projector) * rep.x;
      break;
    case ConeTag::C_x_dual:
      cert.witnessOperator = rep.commutant_factor_from_frame(projector);
      cert.witnessVector = rep.commutant(cert.witnessOperator) * rep.x;
      break;
    case ConeTag::Natural:
      cert.witnessOperator = projector;
      cert.witnessVector = rep.from_frame(projector);
      break;
  }
  cert.witnessPairing = inner(v, cert.witnessVector);
  return cert;
}

SampledCone cone_membership_sampled(const StandardRep& rep, const CVector& v, ConeTag cone,
                                    std::mt19937_64& rng, int samples, double tol) {
  SampledCone out;
  out.minPairing = std::numeric_limits<double>::infinity();
  const int n = rep.n;
  for (int k = 0; k < samples; ++k) {
    CVector w;
    switch (cone) {
      case ConeTag::C_x:
        w = rep.left(random_positive(n, k, rng)) * rep.x;
        break;
      case ConeTag::C_x_dual:
        w = rep.commutant(random_positive(n, k, rng)) * rep.x;
        break;
      case ConeTag::Natural: {
        CMatrix b;
        if (k % 2 == 0) {
          const CVector left_vec = random_unit(n, rng);
          const CVector right_vec = random_unit(n, rng);
          b = left_vec * right_vec.adjoint();
        } else {
          b = random_ginibre(n, rng);
        }
        const CMatrix lb = rep.left(b);
        w = lb * rep.J.apply(lb * rep.x);
        break;
      }
    }
    const Complex pr = inner(v, w);
    const double bound = tol * std::max(1.0, v.norm() * w.norm());
    out.minPairing = std::min(out.minPairing, pr.real());
    out.maxImag = std::max(out.maxImag, std::abs(pr.imag()));
    if (pr.real() < -bound || std::abs(pr.imag()) > bound) out.member = false;
    ++out.samples;
  }
  return out;
}

HermitianMatrix commutant_radon_nikodym(const StandardRep& rep, const CVector& y) {
  const ConeCertificate cert = cone_membership(rep, y, ConeTag::C_x);
  if (!cert.member) {
    throw DomainError("commutant_radon_nikodym: vector is not in C_x (" + cert.reason + ")");
  }
  const CMatrix k = 0.5 * (cert.factor + cert.factor.adjoint());
  const CMatrix b = rep.commutant_factor_from_frame(k);
  return HermitianMatrix(rep.commutant(b * b));
}

CVector cone_representative(const StandardRep& rep, const DensityMatrix& rho_y,
                            const SupportPolicy& policy) {
  const HermitianMatrix r = relative_operator(HermitianMatrix(rep.rho), rho_y.hermitian(), policy);
  const CMatrix r_half = matrix_power(eigh(r), 0.5, policy).matrix();
  return rep.from_frame(rep.sqrt_rho() * r_half);
}

ArcSpectralWeights standard_arc_weights(const StandardRep& rep, const CVector& y) {
  const SpectralDecomposition sx = eigh(commutant_radon_nikodym(rep, y));
  const RVector lambdas = nonnegative_spectrum(sx, SupportPolicy{});
  std::vector<ArcPoint> pts;
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
    pts.push_back({lambdas(k), std::norm(sx.eigenvectors.col(k).dot(rep.x))});
  }
  return ArcSpectralWeights(std::move(pts));
}

CVector hilbert_arc(const StandardRep& rep, const CVector& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("hilbert_arc: parameter outside [0, 1]");
  }
  const SpectralDecomposition sx = eigh(commutant_radon_nikodym(rep, y));
  const CVector u = matrix_power(sx, 0.5 * t).matrix() * rep.x;
  return u / u.norm();
}

double standard_state_tangent(const StandardRep& rep, const CVector& y, double t,
                              const CMatrix& a) {
  const SpectralDecomposition sx = eigh(commutant_radon_nikodym(rep, y));
  const CVector u = matrix_power(sx, 0.5 * t).matrix() * rep.x;
  const CVector yt = u / u.norm();
  const CMatrix log_x = matrix_log_on_support(sx).matrix();
  const CVector ay = rep.left(a) * yt;
  const CVector ly = log_x * yt;
  const Complex value = inner(ay, ly) - inner(ay, yt) * inner(yt, ly);
  return value.real();
}

CyclicSeparating is_cyclic_separating(int n, const CVector& v) {
  if (static_cast<Eigen::Index>(n) * n != v.size()) {
    throw InputError("is_cyclic_separating: vector length is not n^2");
  }
  CyclicSeparating out;
  const CMatrix m = unvec(v, n);
  Eigen::JacobiSVD<CMatrix> svd_m(m);
  const RVector sv = svd_m.singularValues();
  const double thr = 1e-10 * std::max(sv(0), 1e-300);
  out.cyclic = sv(0) > 0.0 && (sv.array() > thr).count() == n;

  // A -> (A (x) I) v, one column per matrix unit.
  const Eigen::Index dim = static_cast<Eigen::Index>(n) * n;
  CMatrix action(dim, dim);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      CMatrix e = CMatrix::Zero(n, n);
      e.row(a) = m.row(b);
      action.col(a * n + b) = vec(e);
    }
  }
  Eigen::JacobiSVD<CMatrix> svd_a(action);
  const RVector sa = svd_a.singularValues();
  const double thr_a = 1e-10 * std::max(sa(0), 1e-300);
  out.separating = sa(0) > 0.0 && (sa.array() > thr_a).count() == dim;
  return out;
}

}  // namespace exparc
