#pragma once

// The n x n matrix algebra in standard form on C^n (x) C^n: A acts as A (x) I,
// the commutant as I (x) B, and vectors are indexed row-major (i*n + j).
//
// Antilinear maps are stored as "conjugate, then multiply": T v = T.matrix *
// conj(v). With this encoding the composition of antilinear maps S, T is
// S.matrix * conj(T.matrix) and the adjoint of T is T.matrix^T.
//
// A representation built from a cyclic separating unit vector x with
// reshaped matrix G (G G^* = rho) also fixes the unitary frame F = V^* from
// the polar decomposition G = rho^{1/2} V. In frame coordinates
// M(v) = mat(v) F the vector x becomes rho^{1/2}, the algebra acts by left
// multiplication, the commutant by right multiplication, J by M -> M^* and
// Delta by M -> rho M rho^{-1}; the exact cone tests below are stated there.

#include <random>
#include <string>

#include "exparc/arc.hpp"
#include "exparc/quantum.hpp"
#include "exparc/spectral.hpp"

namespace exparc {

struct AntilinearMap {
  CMatrix matrix;

  CVector apply(const CVector& v) const { return matrix * v.conjugate(); }
  /// Matrix of the antilinear adjoint: (T u, v) = (T^* v, u).
  AntilinearMap adjoint() const { return {matrix.transpose()}; }
  /// Linear map T2 o T1 of two antilinear maps.
  CMatrix compose(const AntilinearMap& first) const { return matrix * first.matrix.conjugate(); }
};

class StandardRep {
 public:
  int n = 0;
  /// Unit vector, cyclic and separating.
  CVector x;
  /// Density matrix of omega_x on the algebra.
  CMatrix rho;
  /// Unitary F with x -> rho^{1/2} in frame coordinates.
  CMatrix frame;
  /// Closure of A x -> A^* x.
  AntilinearMap S;
  AntilinearMap J;
  HermitianMatrix Delta;
  SpectralDecomposition deltaSpectrum;

  /// Frame coordinates of a vector: mat(v) F.
  CMatrix to_frame(const CVector& v) const;
  CVector from_frame(const CMatrix& m) const;
  /// A (x) I and I (x) B as n^2 x n^2 matrices.
  CMatrix left(const CMatrix& a) const;
  CMatrix commutant(const CMatrix& b) const;
  /// Commutant operator acting as right multiplication by k in frame
  /// coordinates, returned as its factor B (Y = I (x) B).
  CMatrix commutant_factor_from_frame(const CMatrix& k) const;
  /// rho^{1/2} and rho^{-1/2}.
  const CMatrix& sqrt_rho() const { return sqrt_rho_; }
  const CMatrix& inv_sqrt_rho() const { return inv_sqrt_rho_; }

 private:
  friend StandardRep build_standard_rep(const CVector& x);
  CMatrix sqrt_rho_;
  CMatrix inv_sqrt_rho_;
};

/// Standard representation for the purification of a strictly positive rho.
StandardRep build_standard_rep(const DensityMatrix& rho);
/// Standard representation for an arbitrary cyclic separating unit vector.
/// S is assembled from its defining action on the matrix-unit basis and then
/// polar-decomposed.
StandardRep build_standard_rep(const CVector& x);

struct ModularFlow {
  /// B with tau_t(A) = B (x) I.
  CMatrix factor;
  /// || Delta^{it} (A (x) I) Delta^{-it} - B (x) I ||_F.
  double residual = 0.0;
};

/// tau_t(A) = Delta^{it} (A (x) I) Delta^{-it}.
ModularFlow modular_flow(const StandardRep& rep, double t, const CMatrix& a);

enum class ConeTag { C_x, C_x_dual, Natural };

std::string to_string(ConeTag tag);

struct ConeCertificate {
  ConeTag cone = ConeTag::C_x;
  bool member = false;
  /// Frame-coordinate factor: K with M = rho^{1/2} K (C_x), A with
  /// M = A rho^{1/2} (C_x dual), or M itself (natural cone).
  CMatrix factor;
  /// || factor - factor^* ||_F.
  double hermitianDefect = 0.0;
  /// Smallest eigenvalue of the Hermitian part of the factor.
  double minEigenvalue = 0.0;
  /// On rejection: a positive element of the pairing side whose pairing with
  /// v is negative or not real. For C_x it is an algebra element A (pair with
  /// (A (x) I) x); for C_x dual the commutant factor B (pair with
  /// (I (x) B) x); for the natural cone the vector w of the cone itself.
  CMatrix witnessOperator;
  CVector witnessVector;
  /// (v, witness side vector).
  Complex witnessPairing = 0.0;
  std::string reason;
};

/// Exact membership test through the frame reshape.
ConeCertificate cone_membership(const StandardRep& rep, const CVector& v, ConeTag cone,
                                double tol = 1e-10);

struct SampledCone {
  bool member = true;
  /// Smallest real part of the pairings seen and largest imaginary part.
  double minPairing = 0.0;
  double maxImag = 0.0;
  int samples = 0;
};

/// Membership by the defining inequalities against random positive elements:
/// (v, (A (x) I) x) for C_x, (v, (I (x) B) x) for its dual, and
/// (v, (B (x) I) J (B (x) I) x) for the natural cone.
SampledCone cone_membership_sampled(const StandardRep& rep, const CVector& v, ConeTag cone,
                                    std::mt19937_64& rng, int samples = 200,
                                    double tol = 1e-10);

/// X_{y,x} = Y^2 for y = Y x in C_x, as an n^2 x n^2 matrix. Throws DomainError
/// when y is not in C_x.
HermitianMatrix commutant_radon_nikodym(const StandardRep& rep, const CVector& y);

/// The vector of C_x representing rho_y: frame coordinates rho_x^{1/2} R^{1/2}.
CVector cone_representative(const StandardRep& rep, const DensityMatrix& rho_y,
                            const SupportPolicy& policy = {});

/// Spectral data of X_{y,x} from the n^2-dimensional operator.
ArcSpectralWeights standard_arc_weights(const StandardRep& rep, const CVector& y);

/// gamma_{y,x}(t) = e^{-zeta(t)} X^{t/2} x with zeta(t) = log ||X^{t/2} x||.
CVector hilbert_arc(const StandardRep& rep, const CVector& y, double t);

/// (A y_t, [log X] y_t) - (A y_t, y_t)(y_t, [log X] y_t) on the vector arc.
double standard_state_tangent(const StandardRep& rep, const CVector& y, double t,
                              const CMatrix& a);

struct CyclicSeparating {
  bool cyclic = false;
  bool separating = false;
};

/// Cyclic: rank of the reshaped vector is n. Separating: the map
/// A -> (A (x) I) v on all n x n matrices is injective.
CyclicSeparating is_cyclic_separating(int n, const CVector& v);

}  // namespace exparc
