#include "exparc/arc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "exparc/errors.hpp"

namespace exparc {

namespace {

constexpr double kNormTol = 1e-9;
constexpr int kMaxIterations = 200;

void check_parameter(double t, double lo, double hi, const char* what) {
  if (!(t >= lo && t <= hi)) {
    std::ostringstream os;
    os << what << ": parameter " << t << " outside [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
}

// log sum_k w_k lambda_k^t, evaluated with a shifted exponent sum.
double log_partition(const std::vector<ArcPoint>& pts, double t) {
  double shift = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(pts.size());
  for (const auto& p : pts) {
    double term;
    if (p.lambda == 0.0) {
      if (t == 0.0) {
        term = std::log(p.weight);
      } else if (t > 0.0) {
        continue;
      } else {
        throw NotInvertibleError("zeta: negative power of a zero eigenvalue");
      }
    } else {
      term = std::log(p.weight) + t * std::log(p.lambda);
    }
    terms.push_back(term);
    shift = std::max(shift, term);
  }
  if (terms.empty()) {
    throw DomainError("zeta: degenerate arc (all eigenvalues vanish on the support)");
  }
  double acc = 0.0;
  for (double term : terms) acc += std::exp(term - shift);
  return shift + std::log(acc);
}

struct TiltedMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Mean and variance of log(lambda) under w_k lambda_k^t / Z(t), restricted to
// lambda > 0. Only valid when no kernel mass survives at t.
TiltedMoments tilted_moments(const std::vector<ArcPoint>& pts, double t) {
  const double log_z = log_partition(pts, t);
  TiltedMoments m;
  for (const auto& p : pts) {
    if (p.lambda == 0.0) continue;
    const double pi = std::exp(std::log(p.weight) + t * std::log(p.lambda) - log_z);
    m.mean += pi * std::log(p.lambda);
  }
  for (const auto& p : pts) {
    if (p.lambda == 0.0) continue;
    const double pi = std::exp(std::log(p.weight) + t * std::log(p.lambda) - log_z);
    const double d = std::log(p.lambda) - m.mean;
    m.variance += pi * d * d;
  }
  return m;
}

void check_boundary_derivative(const ArcSpectralWeights& arc, double t) {
  if (t <= 0.0 && arc.has_kernel()) {
    std::ostringstream os;
    os << "zeta derivative diverges at t = " << t
       << ": a zero eigenvalue carries positive weight";
    throw DivergentDerivativeError(os.str());
  }
}

}  // namespace

ArcSpectralWeights::ArcSpectralWeights(std::vector<ArcPoint> points, Unchecked) {
  points_.reserve(points.size());
  for (const auto& p : points) {
    if (!std::isfinite(p.lambda) || !std::isfinite(p.weight) || p.lambda < 0.0 ||
        p.weight < 0.0) {
      std::ostringstream os;
      os << "ArcSpectralWeights: invalid point (lambda = " << p.lambda
         << ", weight = " << p.weight << ")";
      throw InputError(os.str());
    }
    if (p.weight >= kWeightFloor) points_.push_back(p);
  }
  if (points_.empty()) {
    throw InputError("ArcSpectralWeights: no point with positive weight");
  }
}

ArcSpectralWeights::ArcSpectralWeights(std::vector<ArcPoint> points)
    : ArcSpectralWeights(std::move(points), Unchecked{}) {
  const double w = total_weight();
  const double m = first_moment();
  if (std::abs(w - 1.0) > kNormTol || std::abs(m - 1.0) > kNormTol) {
    std::ostringstream os;
    os.precision(17);
    os << "ArcSpectralWeights: endpoints not normalized (sum w = " << w
       << ", sum w*lambda = " << m << ")";
    throw InputError(os.str());
  }
}

ArcSpectralWeights ArcSpectralWeights::unnormalized(std::vector<ArcPoint> points) {
  return ArcSpectralWeights(std::move(points), Unchecked{});
}

bool ArcSpectralWeights::has_kernel() const {
  return std::any_of(points_.begin(), points_.end(),
                     [](const ArcPoint& p) { return p.lambda == 0.0; });
}

bool ArcSpectralWeights::is_flat(double rel_tol) const {
  const double hi = lambda_max();
  const double lo = lambda_min();
  return hi - lo <= rel_tol * hi;
}

double ArcSpectralWeights::lambda_max() const {
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, p.lambda);
  return m;
}

double ArcSpectralWeights::lambda_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : points_) m = std::min(m, p.lambda);
  return m;
}

double ArcSpectralWeights::total_weight() const {
  double s = 0.0;
  for (const auto& p : points_) s += p.weight;
  return s;
}

double ArcSpectralWeights::first_moment() const {
  double s = 0.0;
  for (const auto& p : points_) s += p.weight * p.lambda;
  return s;
}

double zeta(const ArcSpectralWeights& arc, double t) {
  check_parameter(t, 0.0, 1.0, "zeta");
  return 0.5 * log_partition(arc.points(), t);
}

double zeta_prime(const ArcSpectralWeights& arc, double t) {
  check_parameter(t, 0.0, 1.0, "zeta_prime");
  check_boundary_derivative(arc, t);
  return 0.5 * tilted_moments(arc.points(), t).mean;
}

double zeta_second(const ArcSpectralWeights& arc, double t) {
  check_parameter(t, 0.0, 1.0, "zeta_second");
  check_boundary_derivative(arc, t);
  return 0.5 * tilted_moments(arc.points(), t).variance;
}

double dual_coordinate(const ArcSpectralWeights& arc, double t) { return zeta_prime(arc, t); }

ArcSpectralWeights subarc(const ArcSpectralWeights& arc, double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << "subarc: parameter " << t << " outside (0, 1]";
    throw DomainError(os.str());
  }
  const double z = zeta(arc, t);
  std::vector<ArcPoint> pts;
  pts.reserve(arc.size());
  for (const auto& p : arc.points()) {
    const double l = p.lambda == 0.0 ? 0.0 : std::exp(t * std::log(p.lambda) - 2.0 * z);
    pts.push_back({l, p.weight});
  }
  return ArcSpectralWeights(std::move(pts));
}

ArcSpectralWeights invert(const ArcSpectralWeights& arc) {
  if (arc.has_kernel()) {
    throw NotInvertibleError(
        "invert: the target vector is not cyclic (zero eigenvalue with positive weight)");
  }
  std::vector<ArcPoint> pts;
  pts.reserve(arc.size());
  for (const auto& p : arc.points()) {
    pts.push_back({1.0 / p.lambda, p.weight * p.lambda});
  }
  return ArcSpectralWeights(std::move(pts));
}

ArcSpectralWeights reparametrize(const ArcSpectralWeights& arc, double s, double t) {
  check_parameter(s, 0.0, 1.0, "reparametrize");
  check_parameter(t, 0.0, 1.0, "reparametrize");
  if (s == t) {
    // Constant arc sitting at gamma(s).
    const double z = zeta(arc, s);
    std::vector<ArcPoint> pts;
    for (const auto& p : arc.points()) {
      const double w = s == 0.0 ? p.weight
                       : p.lambda == 0.0
                           ? 0.0
                           : std::exp(std::log(p.weight) + s * std::log(p.lambda) - 2.0 * z);
      pts.push_back({1.0, w});
    }
    return ArcSpectralWeights(std::move(pts));
  }
  if (s == 0.0) return subarc(arc, t);
  if (s > t) return reparametrize(invert(arc), 1.0 - s, 1.0 - t);
  // 0 < s < t <= 1: go through y, where every arc involved starts or ends.
  const double q = (t - s) / (1.0 - s);
  const ArcSpectralWeights from_y_to_gamma_s = subarc(invert(arc), 1.0 - s);
  return subarc(invert(from_y_to_gamma_s), q);
}

ExtensionCheck check_extendable(const ArcSpectralWeights& arc) {
  if (arc.has_kernel()) {
    return {false, "X has a kernel carrying positive weight; its inverse is unbounded"};
  }
  if (!std::isfinite(arc.lambda_max()) || !std::isfinite(1.0 / arc.lambda_min())) {
    return {false, "X or its inverse is not bounded"};
  }
  return {true, ""};
}

ExtendedArc extend_domain(const ArcSpectralWeights& arc) {
  const ExtensionCheck check = check_extendable(arc);
  if (!check.extendable) {
    throw NotInvertibleError("extend_domain: " + check.reason);
  }
  return ExtendedArc(arc);
}

double ExtendedArc::zeta(double t) const {
  check_parameter(t, -1.0, 1.0, "ExtendedArc::zeta");
  return 0.5 * log_partition(arc_.points(), t);
}

double ExtendedArc::zeta_prime(double t) const {
  check_parameter(t, -1.0, 1.0, "ExtendedArc::zeta_prime");
  return 0.5 * tilted_moments(arc_.points(), t).mean;
}

double ExtendedArc::zeta_second(double t) const {
  check_parameter(t, -1.0, 1.0, "ExtendedArc::zeta_second");
  return 0.5 * tilted_moments(arc_.points(), t).variance;
}

LegendrePair legendre(const ArcSpectralWeights& arc, double s) {
  if (!std::isfinite(s)) {
    throw DomainError("legendre: slope must be finite");
  }
  LegendrePair out;
  out.slope = s;
  if (arc.is_flat()) {
    out.degenerate = true;
    out.tStar = s > 0.0 ? 1.0 : 0.0;
    out.zetaStar = s * out.tStar - zeta(arc, out.tStar);
    return out;
  }

  // With a kernel, zeta jumps at 0: the one-sided limits zeta(0+) and
  // zeta'(0+) come from the points with lambda > 0.
  double slope_lo = 0.0;
  double zeta_lo = 0.0;
  if (arc.has_kernel()) {
    double mass = 0.0;
    double moment = 0.0;
    for (const auto& p : arc.points()) {
      if (p.lambda == 0.0) continue;
      mass += p.weight;
      moment += p.weight * std::log(p.lambda);
    }
    zeta_lo = 0.5 * std::log(mass);
    slope_lo = 0.5 * moment / mass;
  } else {
    slope_lo = zeta_prime(arc, 0.0);
  }
  const double slope_hi = zeta_prime(arc, 1.0);
  double t;
  if (s <= slope_lo) {
    // Supremum at (or, with a kernel, approached from the right of) t = 0.
    out.tStar = 0.0;
    out.zetaStar = -zeta_lo;
    return out;
  } else if (s >= slope_hi) {
    t = 1.0;
  } else {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < kMaxIterations && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (zeta_prime(arc, mid) < s) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    t = 0.5 * (lo + hi);
    // Newton polishing, kept inside the final bracket.
    for (int it = 0; it < 3; ++it) {
      const double curv = zeta_second(arc, t);
      if (!(curv > 0.0)) break;
      const double next = t - (zeta_prime(arc, t) - s) / curv;
      if (!(next > lo && next < hi)) break;
      t = next;
    }
    out.interior = true;
  }
  out.tStar = t;
  out.zetaStar = s * t - zeta(arc, t);
  return out;
}

}  // namespace exparc
