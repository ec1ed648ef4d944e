#pragma once

#include "flatform/matrix.hpp"

#include <cstddef>
#include <memory>

namespace flatform {

struct Signature {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t null = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Coordinate space Q^dim with a symmetric (possibly indefinite or degenerate)
/// bilinear pairing given by its Gram matrix.
class InnerSpace {
 public:
  explicit InnerSpace(Matrix gram);

  static std::shared_ptr<const InnerSpace> euclidean(std::size_t dim);
  /// U^p + U^p with <<(a,b),(c,d)>> = <a,c> - <b,d> for a Euclidean U^p.
  static std::shared_ptr<const InnerSpace> split(std::size_t p);

  std::size_t dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }

  Scalar pair(std::span<const Scalar> u, std::span<const Scalar> v) const;
  /// Gram matrix of a family of vectors given as rows: B G B^T.
  Matrix gram_of(const Matrix& rows) const;
  Signature signature() const;

  friend bool operator==(const InnerSpace& a, const InnerSpace& b) { return &a == &b || a.gram_ == b.gram_; }

 private:
  Matrix gram_;
};

/// Signature of a symmetric matrix by exact congruence diagonalization.
Signature signature_of(const Matrix& symmetric);

/// A linear subspace of an InnerSpace. The basis rows are always linearly
/// independent; they are kept as given (no normalization).
class Subspace {
 public:
  using AmbientPtr = std::shared_ptr<const InnerSpace>;

  /// Zero subspace.
  explicit Subspace(AmbientPtr ambient);
  /// Takes `basis` as is; throws std::invalid_argument if its rows are dependent.
  static Subspace from_basis(AmbientPtr ambient, Matrix basis);
  /// Span of arbitrary generators; keeps the first independent subset.
  static Subspace span(AmbientPtr ambient, const Matrix& generators);
  static Subspace whole(AmbientPtr ambient);

  const InnerSpace& ambient() const { return *ambient_; }
  const AmbientPtr& ambient_ptr() const { return ambient_; }
  const Matrix& basis() const { return basis_; }
  std::size_t dim() const { return basis_.rows(); }
  std::size_t ambient_dim() const { return ambient_->dim(); }

  bool contains(std::span<const Scalar> v) const;
  bool contains(const Subspace& other) const;
  bool same_as(const Subspace& other) const;
  Matrix gram() const { return ambient_->gram_of(basis_); }

 private:
  Subspace(AmbientPtr ambient, Matrix basis);

  AmbientPtr ambient_;
  Matrix basis_;
};

/// {w : <<w, s>> = 0}.
Subspace perp(const Subspace& s);
/// s ∩ s^⊥.
Subspace radical(const Subspace& s);
/// Throws std::invalid_argument when the ambients differ.
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);
/// Image of s under a linear map given as a matrix acting on columns.
Subspace map(const Matrix& linear, const Subspace& s, Subspace::AmbientPtr target);

/// Orthogonal projection onto a nondegenerate subspace, as an ambient-size
/// matrix acting on columns. Throws std::invalid_argument if s is degenerate.
Matrix orthogonal_projector(const Subspace& s);

bool is_isotropic(const Subspace& s);
bool is_degenerate(const Subspace& s);

/// Isotropic splitting  W = radical ⊕ dual ⊕ rest  of a nondegenerate ambient
/// relative to a subspace L, with radical = L ∩ L^⊥.
struct Decomposition {
  Subspace radical;
  Subspace dual;
  Subspace rest;
};

/// Requires a nondegenerate ambient (std::invalid_argument otherwise).
/// The dual part is one admissible choice among many; only `radical` is
/// determined by L.
Decomposition decompose(const Subspace& l);

}  // namespace flatform
