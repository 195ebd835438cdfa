#include "exparc/quantum.hpp"

#include <cmath>
#include <sstream>

#include "exparc/errors.hpp"

namespace exparc {

namespace {

constexpr double kPsdTol = 1e-10;
constexpr double kTraceTol = 1e-12;

// Everything derived from R = rho_x^{-1/2} rho_y rho_x^{-1/2} in one pass.
struct RelativeData {
  CMatrix sqrt_x;
  SpectralDecomposition r;
  RVector lambdas;  // spectrum of R after the support policy
  ArcSpectralWeights weights;
};

RelativeData relative_data(const DensityMatrix& rho_x, const DensityMatrix& rho_y,
                           const SupportPolicy& policy) {
  if (rho_x.dim() != rho_y.dim()) {
    throw InputError("density matrices differ in dimension");
  }
  const HermitianMatrix r = relative_operator(rho_x.hermitian(), rho_y.hermitian(), policy);
  SpectralDecomposition sr = eigh(r);
  RVector lambdas = nonnegative_spectrum(sr, policy);
  std::vector<ArcPoint> pts;
  pts.reserve(static_cast<std::size_t>(lambdas.size()));
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
    const CVector v = sr.eigenvectors.col(k);
    const double w = (v.adjoint() * rho_x.matrix() * v)(0, 0).real();
    pts.push_back({lambdas(k), std::max(w, 0.0)});
  }
  const CMatrix sqrt_x = matrix_power(eigh(rho_x.hermitian()), 0.5, policy).matrix();
  return RelativeData{sqrt_x, std::move(sr), std::move(lambdas),
                      ArcSpectralWeights(std::move(pts))};
}

void check_unit_interval(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << what << ": parameter " << t << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

}  // namespace

DensityMatrix::DensityMatrix(HermitianMatrix m) : m_(std::move(m)) {
  const SpectralDecomposition s = eigh(m_);
  const double lo = s.eigenvalues(0);
  if (lo < -kPsdTol) {
    std::ostringstream os;
    os << "DensityMatrix: not positive semidefinite (smallest eigenvalue " << lo << ")";
    throw InputError(os.str());
  }
  const double tr = m_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os.precision(17);
    os << "DensityMatrix: trace " << tr << " differs from 1";
    throw InputError(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  return DensityMatrix(HermitianMatrix(CMatrix::Identity(n, n) / static_cast<double>(n)));
}

bool DensityMatrix::faithful(const SupportPolicy& policy) const {
  const RVector l = nonnegative_spectrum(eigh(m_), policy);
  return (l.array() > 0.0).all();
}

CMatrix PurificationVector::reshape(const CVector& v) const {
  if (v.size() != static_cast<Eigen::Index>(n) * n) {
    throw InputError("PurificationVector::reshape: vector length is not n^2");
  }
  CMatrix flat(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) flat(a, b) = v(a * n + b);
  }
  return flat * eigenbasis.conjugate() * eigenbasis.adjoint();
}

CMatrix PurificationVector::reshaped() const { return reshape(components); }

PurificationVector purify(const DensityMatrix& rho) {
  const SpectralDecomposition s = eigh(rho.hermitian());
  const RVector p = nonnegative_spectrum(s, SupportPolicy{});
  const int n = rho.dim();
  PurificationVector x;
  x.n = n;
  x.eigenbasis = s.eigenvectors;
  x.separating = (p.array() > 0.0).all();
  x.components = CVector::Zero(static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i) {
    const CVector e = s.eigenvectors.col(i);
    const double amp = std::sqrt(p(i));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) x.components(a * n + b) += amp * e(a) * e(b);
    }
  }
  return x;
}

Complex vector_state(const CVector& x, const CMatrix& a) {
  const Eigen::Index n = a.rows();
  if (x.size() != n * n) {
    throw InputError("vector_state: vector length is not n^2");
  }
  CMatrix flat(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) flat(i, j) = x(i * n + j);
  }
  // (x, (A (x) I) x) = Tr(flat^* A flat)
  return (flat.adjoint() * a * flat).trace();
}

ArcSpectralWeights quantum_arc_weights(const DensityMatrix& rho_x, const DensityMatrix& rho_y,
                                       const SupportPolicy& policy) {
  return relative_data(rho_x, rho_y, policy).weights;
}

DensityMatrix arc_density(const DensityMatrix& rho_x, const DensityMatrix& rho_y, double t,
                          const SupportPolicy& policy) {
  check_unit_interval(t, "arc_density");
  const RelativeData d = relative_data(rho_x, rho_y, policy);
  const double scale = std::exp(-2.0 * zeta(d.weights, t));
  SpectralDecomposition clipped = d.r;
  clipped.eigenvalues = d.lambdas;
  const CMatrix r_t = matrix_power(clipped, t, policy).matrix();
  return DensityMatrix(HermitianMatrix(scale * d.sqrt_x * r_t * d.sqrt_x));
}

HermitianMatrix arc_density_derivative(const DensityMatrix& rho_x, const DensityMatrix& rho_y,
                                       double t, const SupportPolicy& policy) {
  check_unit_interval(t, "arc_density_derivative");
  const RelativeData d = relative_data(rho_x, rho_y, policy);
  if (t == 0.0 && (d.lambdas.array() == 0.0).any()) {
    throw DivergentDerivativeError(
        "arc_density_derivative: R has a kernel carrying reference mass; the derivative "
        "at t = 0 diverges");
  }
  const double z = zeta(d.weights, t);
  const double zp = zeta_prime(d.weights, t);
  CVector f(d.lambdas.size());
  for (Eigen::Index k = 0; k < d.lambdas.size(); ++k) {
    const double l = d.lambdas(k);
    f(k) = l == 0.0 ? 0.0 : std::pow(l, t) * (std::log(l) - 2.0 * zp);
  }
  const CMatrix inner = d.r.eigenvectors * f.asDiagonal() * d.r.eigenvectors.adjoint();
  return HermitianMatrix(std::exp(-2.0 * z) * d.sqrt_x * inner * d.sqrt_x);
}

double state_tangent(const DensityMatrix& rho_x, const DensityMatrix& rho_y, double t,
                     const HermitianMatrix& a, const SupportPolicy& policy) {
  if (a.dim() != rho_x.dim()) {
    throw InputError("state_tangent: observable dimension differs from state dimension");
  }
  const HermitianMatrix rho_dot = arc_density_derivative(rho_x, rho_y, t, policy);
  return (rho_dot.matrix() * a.matrix()).trace().real();
}

DensityMatrix log_geodesic(const DensityMatrix& rho_x, const DensityMatrix& rho_y, double t,
                           const SupportPolicy& policy) {
  check_unit_interval(t, "log_geodesic");
  if (rho_x.dim() != rho_y.dim()) {
    throw InputError("log_geodesic: density matrices differ in dimension");
  }
  const CMatrix log_x = matrix_log(eigh(rho_x.hermitian()), policy).matrix();
  const CMatrix log_y = matrix_log(eigh(rho_y.hermitian()), policy).matrix();
  const HermitianMatrix e = matrix_exp(HermitianMatrix((1.0 - t) * log_x + t * log_y));
  return DensityMatrix(HermitianMatrix(e.matrix() / e.trace()));
}

double trace_distance(const CMatrix& a, const CMatrix& b) { return 0.5 * trace_norm(a - b); }

}  // namespace exparc
