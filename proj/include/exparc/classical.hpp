#pragma once

// Diagonal-algebra states: probability vectors, optionally carrying
// quadrature weights so that a grid discretization of a density on R^n uses
// the same formulas (sum_i weights_i * quadrature_i = 1).

#include <vector>

#include "exparc/arc.hpp"

namespace exparc {

class ProbabilityVector {
 public:
  /// Unit quadrature.
  explicit ProbabilityVector(std::vector<double> weights);
  ProbabilityVector(std::vector<double> weights, std::vector<double> quadrature);

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& quadrature() const noexcept { return quadrature_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  /// weights_i * quadrature_i, the probability mass of cell i.
  double mass(std::size_t i) const { return weights_[i] * quadrature_[i]; }
  bool faithful() const;

 private:
  std::vector<double> weights_;
  std::vector<double> quadrature_;
};

/// A diagonal observable A (its diagonal entries).
struct DiscreteObservable {
  std::vector<double> values;
};

/// omega_p(A) = sum_i p_i A_i quadrature_i.
double expectation(const ProbabilityVector& p, const DiscreteObservable& a);

/// Points (q_i / p_i, p_i * quadrature_i). p must be strictly positive.
ArcSpectralWeights radon_nikodym(const ProbabilityVector& p, const ProbabilityVector& q);

/// r_t = e^{-2 zeta(t)} p^{1-t} q^t. At t = 0 this is p even when q has zeros.
ProbabilityVector arc_point(const ProbabilityVector& p, const ProbabilityVector& q, double t);

/// False when q vanishes somewhere on the support of p: then arc_point jumps
/// at t = 0.
bool arc_continuous_at_zero(const ProbabilityVector& p, const ProbabilityVector& q);

/// H_i = log(q_i / p_i). Requires q strictly positive.
DiscreteObservable tangent_generator(const ProbabilityVector& p, const ProbabilityVector& q);

/// d/dt omega_t(A) = omega_t(A H) - omega_t(A) omega_t(H), with H restricted
/// to the support of q when t > 0.
double classical_state_tangent(const ProbabilityVector& p, const ProbabilityVector& q,
                               double t, const DiscreteObservable& a);

/// D(p || q) = sum_i p_i log(p_i / q_i) (quadrature weighted).
double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& q);

}  // namespace exparc
