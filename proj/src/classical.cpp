#include "exparc/classical.hpp"

#include <cmath>
#include <sstream>

#include "exparc/errors.hpp"

namespace exparc {

namespace {

constexpr double kProbabilityTol = 1e-12;

void check_compatible(const ProbabilityVector& p, const ProbabilityVector& q, const char* what) {
  if (p.size() != q.size()) {
    throw InputError(std::string(what) + ": probability vectors differ in length");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p.quadrature()[i];
    const double b = q.quadrature()[i];
    if (std::abs(a - b) > 1e-15 * std::max(a, b)) {
      throw InputError(std::string(what) + ": quadrature weights differ");
    }
  }
}

void check_faithful(const ProbabilityVector& p, const char* what) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) {
      throw FaithfulnessError(std::string(what) + ": reference is not faithful (p_" +
                              std::to_string(i) + " = 0)");
    }
  }
}

}  // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> weights)
    : ProbabilityVector(weights, std::vector<double>(weights.size(), 1.0)) {}

ProbabilityVector::ProbabilityVector(std::vector<double> weights, std::vector<double> quadrature)
    : weights_(std::move(weights)), quadrature_(std::move(quadrature)) {
  if (weights_.empty()) {
    throw InputError("ProbabilityVector: empty");
  }
  if (weights_.size() != quadrature_.size()) {
    throw InputError("ProbabilityVector: weights and quadrature differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw InputError("ProbabilityVector: weight " + std::to_string(i) +
                       " is negative or not finite");
    }
    if (!std::isfinite(quadrature_[i]) || quadrature_[i] <= 0.0) {
      throw InputError("ProbabilityVector: quadrature weight " + std::to_string(i) +
                       " must be positive");
    }
    total += weights_[i] * quadrature_[i];
  }
  if (std::abs(total - 1.0) > kProbabilityTol) {
    std::ostringstream os;
    os.precision(17);
    os << "ProbabilityVector: total mass " << total << " differs from 1";
    throw InputError(os.str());
  }
}

bool ProbabilityVector::faithful() const {
  for (double w : weights_) {
    if (w <= 0.0) return false;
  }
  return true;
}

double expectation(const ProbabilityVector& p, const DiscreteObservable& a) {
  if (a.values.size() != p.size()) {
    throw InputError("expectation: observable length differs from state length");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += p.mass(i) * a.values[i];
  return acc;
}

ArcSpectralWeights radon_nikodym(const ProbabilityVector& p, const ProbabilityVector& q) {
  check_compatible(p, q, "radon_nikodym");
  check_faithful(p, "radon_nikodym");
  std::vector<ArcPoint> pts;
  pts.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    pts.push_back({q[i] / p[i], p.mass(i)});
  }
  return ArcSpectralWeights(std::move(pts));
}

ProbabilityVector arc_point(const ProbabilityVector& p, const ProbabilityVector& q, double t) {
  const ArcSpectralWeights arc = radon_nikodym(p, q);
  if (t == 0.0) return p;
  const double z = zeta(arc, t);
  std::vector<double> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i] = q[i] == 0.0 ? 0.0 : p[i] * std::exp(t * std::log(q[i] / p[i]) - 2.0 * z);
  }
  return ProbabilityVector(std::move(r), p.quadrature());
}

bool arc_continuous_at_zero(const ProbabilityVector& p, const ProbabilityVector& q) {
  check_compatible(p, q, "arc_continuous_at_zero");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] == 0.0) return false;
  }
  return true;
}

DiscreteObservable tangent_generator(const ProbabilityVector& p, const ProbabilityVector& q) {
  check_compatible(p, q, "tangent_generator");
  check_faithful(p, "tangent_generator");
  DiscreteObservable h;
  h.values.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) {
      throw DomainError("tangent_generator: generator undefined, q_" + std::to_string(i) +
                        " = 0");
    }
    h.values[i] = std::log(q[i] / p[i]);
  }
  return h;
}

double classical_state_tangent(const ProbabilityVector& p, const ProbabilityVector& q, double t,
                               const DiscreteObservable& a) {
  if (a.values.size() != p.size()) {
    throw InputError("classical_state_tangent: observable length differs from state length");
  }
  if (t == 0.0 && !arc_continuous_at_zero(p, q)) {
    throw DivergentDerivativeError(
        "classical_state_tangent: derivative undefined at t = 0 (target vanishes on the "
        "support of the reference)");
  }
  const ProbabilityVector r = arc_point(p, q, t);
  double mean_a = 0.0;
  double mean_h = 0.0;
  double mean_ah = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) continue;
    const double h = std::log(q[i] / p[i]);
    mean_h += r.mass(i) * h;
    mean_ah += r.mass(i) * a.values[i] * h;
  }
  for (std::size_t i = 0; i < p.size(); ++i) mean_a += r.mass(i) * a.values[i];
  return mean_ah - mean_a * mean_h;
}

double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& q) {
  check_compatible(p, q, "kl_divergence");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw DomainError("kl_divergence: infinite divergence, q_" + std::to_string(i) +
                        " = 0 on the support of p");
    }
    d += p.mass(i) * std::log(p[i] / q[i]);
  }
  return d;
}

}  // namespace exparc
