#pragma once

#include "flatform/bilinear.hpp"
#include "flatform/complex_structure.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flatform {

/// Pointwise data of a real Kaehler submanifold M^{2n} -> R^{2n+p}: the
/// complex structure J of the tangent space and the symmetric second
/// fundamental form alpha with values in a Euclidean U^p.
class KaehlerPoint {
 public:
  /// Validates n, p >= 1, shapes, J^2 = -I, a Euclidean target and symmetry
  /// of alpha. Throws std::invalid_argument with a field-specific message.
  static KaehlerPoint make(std::size_t n, std::size_t p, ComplexStructure j, BilinearMap alpha);

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }
  const ComplexStructure& j() const { return j_; }
  const BilinearMap& alpha() const { return alpha_; }

  friend bool operator==(const KaehlerPoint& a, const KaehlerPoint& b) {
    return a.n_ == b.n_ && a.p_ == b.p_ && a.j_.matrix() == b.j_.matrix() && a.alpha_ == b.alpha_;
  }

 private:
  KaehlerPoint(std::size_t n, std::size_t p, ComplexStructure j, BilinearMap alpha)
      : n_(n), p_(p), j_(std::move(j)), alpha_(std::move(alpha)) {}

  std::size_t n_;
  std::size_t p_;
  ComplexStructure j_;
  BilinearMap alpha_;
};

/// gamma(X,Y) = (alpha(X,Y), alpha(X,JY)) in W^{p,p}.
BilinearMap build_gamma(const KaehlerPoint& kp);
/// beta(X,Y) = gamma(X,Y) + gamma(JX,JY).
BilinearMap build_beta(const KaehlerPoint& kp);
/// theta(X,Y) = gamma(X,Y) - gamma(JX,JY).
BilinearMap build_theta(const KaehlerPoint& kp);

/// alpha(JX,Y) = alpha(X,JY) on all basis pairs.
bool is_pluriharmonic(const KaehlerPoint& kp);

struct CompatibilityResult {
  bool beta_gamma = false;  // <<beta(X,Y),gamma(Z,T)>> = <<beta(X,T),gamma(Z,Y)>>
  bool beta_theta = false;  // same identity with theta in place of gamma
  /// beta_gamma implies beta_theta; false means that implication failed.
  bool implication_holds() const { return !beta_gamma || beta_theta; }
};

CompatibilityResult check_compatibility(const KaehlerPoint& kp);

/// {Y : alpha(X,JY) = alpha(JX,Y) for all X}, solved from alpha directly.
Subspace pluriharmonic_nullity(const KaehlerPoint& kp);

/// N(gamma) = N(beta) ∩ N(theta), each nullity computed on its own.
bool nullity_intersection_identity(const KaehlerPoint& kp);

struct SBetaReport {
  Subspace u1{InnerSpace::euclidean(0)};  // S(pi_1 o beta) in U^p
  std::size_t s = 0;
  bool image_is_double = false;  // S(beta) = U1 ⊕ U1
  bool nullity_matches = false;  // N(beta) = N(gamma_{U1})
};

/// Requires check_compatibility(kp).beta_gamma; throws PreconditionViolation
/// otherwise.
SBetaReport sbeta_identities(const KaehlerPoint& kp);

/// Structural facts for a T-compatible form phi : V x V -> W^{p,p}.
struct EvenReport {
  std::size_t image_dim = 0;
  std::size_t radical_dim = 0;
  std::size_t nullity_dim = 0;
  bool image_even = false;
  bool radical_even = false;
  bool image_t_invariant = false;
  bool radical_t_invariant = false;
  bool nullity_j_invariant = false;
  bool omega_matches = false;  // dim U = dim pi_1(U) and S(phi_Omega) = U
  bool all() const {
    return image_even && radical_even && image_t_invariant && radical_t_invariant && nullity_j_invariant &&
           omega_matches;
  }
};

EvenReport even_facts(const BilinearMap& phi, const ComplexStructure& j, const SplitSpace& split);

/// theta_j = pi_{U_j x U_j} o theta for U^p = U1 ⊕ U1^⊥, U1 = S(pi_1 o beta).
std::pair<BilinearMap, BilinearMap> split_theta(const KaehlerPoint& kp, const Subspace& u1);

enum class DiagonalizationStatus {
  ok,                // exact frame found; (i)-(iii) checked exactly
  kappa_deficient,   // kappa(beta) < 2p: only the nullity split is returned
  not_flat,          // beta is not flat
  irrational_frame,  // eigenplanes are not rational: floating-point frame only
  failed,            // a postcondition did not hold
};

std::string to_string(DiagonalizationStatus status);

struct BetaDiagonalization {
  DiagonalizationStatus status = DiagonalizationStatus::failed;
  std::size_t kappa = 0;
  Subspace nullity{InnerSpace::euclidean(0)};
  /// X_1..X_n; the basis of V is {X_i, J X_i}. Empty unless an exact frame exists.
  std::vector<Vector> frame;
  /// Floating-point frame, filled only for irrational_frame.
  std::vector<std::vector<double>> float_frame;
  /// <<beta(X_j,X_j), beta(X_j,X_j)>> for j <= p after scaling.
  std::vector<Scalar> block_norms;
  bool unit_scaling = false;      // all block_norms equal 1 exactly
  bool nullity_split = false;     // (i)
  bool cross_terms_zero = false;  // (ii)
  bool gram_ok = false;           // (iii), exact or in the weakened diagonal form
  /// Largest deviation from diag(1,-1,...) of the floating-point normalized
  /// Gram matrix; set whenever unit_scaling is false.
  std::optional<double> float_witness_error;
  std::string detail;
};

/// Orthonormal complex frame adapted to flat beta when kappa(beta) = 2p.
BetaDiagonalization diagonalize_beta(const KaehlerPoint& kp, std::uint64_t seed);

/// A J-basis {v_1, J v_1, ..., v_k, J v_k} of a J-invariant subspace,
/// returned as the vectors v_i. Throws std::invalid_argument if s is not
/// J-invariant.
std::vector<Vector> complex_basis(const Subspace& s, const ComplexStructure& j);

}  // namespace flatform
