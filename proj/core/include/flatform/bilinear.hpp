#pragma once

#include "flatform/complex_structure.hpp"
#include "flatform/inner_space.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace flatform {

/// Raised when an operation is called on inputs that violate its stated
/// precondition (as opposed to a computed property turning out false).
class PreconditionViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bilinear map phi: V1 x V2 -> W, stored as the values phi(e_i, f_j) on
/// coordinate basis pairs. W carries an inner product of any signature.
class BilinearMap {
 public:
  using SpacePtr = std::shared_ptr<const InnerSpace>;

  /// Zero map.
  BilinearMap(std::size_t v1dim, std::size_t v2dim, SpacePtr target);

  std::size_t v1dim() const { return v1dim_; }
  std::size_t v2dim() const { return v2dim_; }
  std::size_t wdim() const { return target_->dim(); }
  const InnerSpace& target() const { return *target_; }
  const SpacePtr& target_ptr() const { return target_; }
  /// Coordinate spaces for subspaces of V1 / V2 (Euclidean Gram, used only
  /// as a container).
  const SpacePtr& v1_space() const { return v1_space_; }
  const SpacePtr& v2_space() const { return v2_space_; }

  const Vector& at(std::size_t i, std::size_t j) const { return values_[i * v2dim_ + j]; }
  void set(std::size_t i, std::size_t j, Vector value);

  Vector operator()(std::span<const Scalar> x, std::span<const Scalar> y) const;
  /// phi_X : V2 -> W as a wdim x v2dim matrix.
  Matrix partial(std::span<const Scalar> x) const;
  /// All basis values phi(e_i, f_j) as rows, row index i * v2dim + j.
  Matrix value_rows() const;
  /// <<phi(e_i,f_j), phi(e_k,f_l)>> indexed by (i*v2+j, k*v2+l).
  Matrix pairing_table() const;

  bool is_symmetric() const;
  bool is_zero() const;

  /// L o phi for a linear map L : W -> W' given as a dim(W') x dim(W) matrix.
  BilinearMap post_compose(const Matrix& linear, SpacePtr new_target) const;
  /// phi restricted to V1 x span(rows of basis); the new V2 coordinates are
  /// the coefficients with respect to `basis`.
  BilinearMap restrict_right(const Matrix& basis) const;

  /// (X, Y) -> phi(A X, B Y) for square coordinate maps A on V1 and B on V2.
  BilinearMap precompose(const Matrix& a, const Matrix& b) const;

  friend bool operator==(const BilinearMap& a, const BilinearMap& b);
  friend BilinearMap operator+(const BilinearMap& a, const BilinearMap& b);
  friend BilinearMap operator-(const BilinearMap& a, const BilinearMap& b);
  friend BilinearMap operator*(const Scalar& s, const BilinearMap& phi);

 private:
  std::size_t v1dim_;
  std::size_t v2dim_;
  SpacePtr target_;
  SpacePtr v1_space_;
  SpacePtr v2_space_;
  std::vector<Vector> values_;
};

/// S(phi): span of all values.
Subspace image(const BilinearMap& phi);
/// N(phi) = {Y in V2 : phi(X, Y) = 0 for all X}.
Subspace nullity(const BilinearMap& phi);
/// ker phi_X.
Subspace partial_kernel(const BilinearMap& phi, std::span<const Scalar> x);
/// phi_X(V2).
Subspace partial_image(const BilinearMap& phi, std::span<const Scalar> x);
/// U(X) = phi_X(V2) ∩ phi_X(V2)^⊥.
Subspace u_space(const BilinearMap& phi, std::span<const Scalar> x);
/// L(X) = S(phi restricted to V1 x ker phi_X).
Subspace l_space(const BilinearMap& phi, std::span<const Scalar> x);

/// <<phi(X,Y), psi(Z,T)>> = <<phi(X,T), psi(Z,Y)>> on all basis quadruples.
/// Both maps must share V1, V2 and the target.
bool satisfies_exchange(const BilinearMap& phi, const BilinearMap& psi);

bool is_flat(const BilinearMap& phi);
bool is_null(const BilinearMap& phi);

struct RegularElementCertificate {
  Vector vector;
  std::size_t attained_rank = 0;
  std::size_t kappa = 0;
  std::size_t tau_at_x = 0;    // dim U(X)
  std::size_t sigma_at_x = 0;  // dim L(X)
  std::uint64_t seed = 0;
  std::size_t candidates = 0;  // number of points whose rank was evaluated
};

/// Number of random integer points drawn by kappa(); basis vectors and
/// pairwise sums are evaluated in addition.
inline constexpr std::size_t kRegularSamples = 64;
/// Regular candidates (in sampling order) examined when minimizing tau, then sigma.
inline constexpr std::size_t kTauSigmaCandidates = 8;

/// Best-found regular element: maximizes dim phi_X(V2) over seeded samples,
/// then minimizes tau and sigma among the first regular samples.
RegularElementCertificate kappa(const BilinearMap& phi, std::uint64_t seed);

/// Fills tau/sigma for a given point (rank fields set to its attained rank).
RegularElementCertificate certify_at(const BilinearMap& phi, std::span<const Scalar> x);

struct PluriharmonicBound {
  std::size_t image_dim = 0;
  std::size_t kappa = 0;
  bool holds = false;  // 4 dim S <= kappa (kappa + 2)
};

/// For symmetric phi : V x V -> W^{p,p} with T phi(X,Y) = phi(X,JY).
/// Throws PreconditionViolation when phi is not symmetric, not valued in the
/// split space or not T-compatible.
PluriharmonicBound pluriharmonic_bound_check(const BilinearMap& phi, const ComplexStructure& j,
                                             const SplitSpace& split, std::uint64_t seed);

/// Whether T phi(X, Y) = phi(X, J Y) on all basis pairs.
bool is_t_compatible(const BilinearMap& phi, const ComplexStructure& j, const SplitSpace& split);

/// N(X) ⊇ N_1 ⊇ N_2 ⊇ ... for pivots (X, Z_1, Z_2, ...):
/// N(X) = ker phi_X and N_{k+1} = ker(phi_{Z_{k+1}} restricted to N_k).
std::vector<Subspace> kernel_chain(const BilinearMap& phi, const std::vector<Vector>& pivots);

}  // namespace flatform
