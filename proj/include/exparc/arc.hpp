#pragma once

// Carrier-independent calculus of an exponential arc.
//
// An arc from a reference vector x to a target y is fully described, as far as
// its normalization is concerned, by the spectral data of the commutant
// Radon-Nikodym operator X relative to x: eigenvalues lambda_k >= 0 and the
// mass w_k of x in each eigenspace. With Z(t) = sum_k w_k lambda_k^t,
//
//   zeta(t) = 1/2 log Z(t),
//   zeta'(t) = 1/2 E_t[log lambda],   zeta''(t) = 1/2 Var_t[log lambda],
//
// where E_t, Var_t are taken under the tilted weights w_k lambda_k^t / Z(t).

#include <string>
#include <vector>

namespace exparc {

struct ArcPoint {
  double lambda = 1.0;
  double weight = 0.0;
};

/// Weights below this are dropped at construction.
inline constexpr double kWeightFloor = 1e-15;

class ArcSpectralWeights {
 public:
  /// Validates lambda >= 0, weight >= 0 (finite), drops weights below
  /// kWeightFloor and checks sum w = 1 and sum w*lambda = 1 within 1e-9.
  explicit ArcSpectralWeights(std::vector<ArcPoint> points);

  /// Same validation except the normalization checks.
  static ArcSpectralWeights unnormalized(std::vector<ArcPoint> points);

  const std::vector<ArcPoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

  /// True when some lambda = 0 carries positive weight.
  bool has_kernel() const;
  /// True when all lambda on the support coincide (zeta is affine).
  bool is_flat(double rel_tol = 1e-12) const;
  double lambda_max() const;
  double lambda_min() const;
  double total_weight() const;
  double first_moment() const;

 private:
  struct Unchecked {};
  ArcSpectralWeights(std::vector<ArcPoint> points, Unchecked);

  std::vector<ArcPoint> points_;
};

/// 1/2 log sum_k w_k lambda_k^t for t in [0, 1] (0^0 = 1).
double zeta(const ArcSpectralWeights& arc, double t);
double zeta_prime(const ArcSpectralWeights& arc, double t);
double zeta_second(const ArcSpectralWeights& arc, double t);

/// Dual chart coordinate t* = zeta'(t).
double dual_coordinate(const ArcSpectralWeights& arc, double t);

/// Arc connecting gamma(t) to x: points (lambda^t e^{-2 zeta(t)}, w).
ArcSpectralWeights subarc(const ArcSpectralWeights& arc, double t);

/// Arc connecting x to y, seen from y: points (1/lambda, w lambda).
ArcSpectralWeights invert(const ArcSpectralWeights& arc);

/// Arc connecting gamma(t) to gamma(s); evaluated at r it reproduces the
/// original arc at (1-r)s + rt. Built from subarc and invert.
ArcSpectralWeights reparametrize(const ArcSpectralWeights& arc, double s, double t);

struct ExtensionCheck {
  bool extendable = false;
  std::string reason;
};

ExtensionCheck check_extendable(const ArcSpectralWeights& arc);

/// An arc whose X is bounded with bounded inverse, evaluable on [-1, 1].
class ExtendedArc {
 public:
  const ArcSpectralWeights& weights() const noexcept { return arc_; }
  double zeta(double t) const;
  double zeta_prime(double t) const;
  double zeta_second(double t) const;

 private:
  friend ExtendedArc extend_domain(const ArcSpectralWeights& arc);
  explicit ExtendedArc(ArcSpectralWeights arc) : arc_(std::move(arc)) {}
  ArcSpectralWeights arc_;
};

/// Throws NotInvertibleError (with the reason) when the arc has a kernel.
ExtendedArc extend_domain(const ArcSpectralWeights& arc);

struct LegendrePair {
  double tStar = 0.0;
  double zetaStar = 0.0;
  double slope = 0.0;
  /// Maximizer lies strictly inside (0, 1).
  bool interior = false;
  /// zeta is affine on [0, 1]; the maximizer is a boundary choice.
  bool degenerate = false;
};

/// zeta*(s) = sup_{t in [0,1]} (s t - zeta(t)) with its maximizer. When the
/// arc has a kernel, zeta jumps at t = 0 and for slopes at or below zeta'(0+)
/// the supremum -zeta(0+) is only approached as t -> 0+; tStar is then 0.
LegendrePair legendre(const ArcSpectralWeights& arc, double s);

}  // namespace exparc
