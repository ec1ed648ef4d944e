#pragma once

#include "flatform/inner_space.hpp"

#include <memory>

namespace flatform {

/// Linear J with J^2 = -I on an even-dimensional coordinate space.
class ComplexStructure {
 public:
  /// Throws std::invalid_argument unless `m` is square, even-sized and m*m = -I.
  explicit ComplexStructure(Matrix m);

  /// Block-diagonal [[0,-1],[1,0]] on consecutive coordinate pairs, so that
  /// J e_{2k} = e_{2k+1} and J e_{2k+1} = -e_{2k}.
  static ComplexStructure standard(std::size_t complex_dim);

  std::size_t dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  Vector apply(std::span<const Scalar> x) const { return matrix_.apply(x); }

  /// <Jx, Jy> = <x, y> for the given pairing.
  bool is_isometric(const InnerSpace& space) const;

 private:
  Matrix matrix_;
};

/// Whether `m` satisfies m*m = -I.
bool squares_to_minus_identity(const Matrix& m);

/// Smallest J-invariant subspace containing s, i.e. s + J s.
Subspace complex_hull(const Subspace& s, const ComplexStructure& j);
bool is_invariant(const Subspace& s, const ComplexStructure& j);
/// s ∩ J s.
Subspace complex_part(const Subspace& s, const ComplexStructure& j);

/// W^{p,p} = U^p ⊕ U^p with the signature (p,p) pairing and the operator
/// T(xi, eta) = (eta, -xi).
class SplitSpace {
 public:
  explicit SplitSpace(std::size_t p);

  std::size_t p() const { return p_; }
  std::size_t dim() const { return 2 * p_; }
  const std::shared_ptr<const InnerSpace>& space() const { return space_; }
  const Matrix& t() const { return t_; }

  Vector apply_t(std::span<const Scalar> w) const { return t_.apply(w); }
  /// (xi, eta) from the two halves.
  Vector join(std::span<const Scalar> xi, std::span<const Scalar> eta) const;
  Vector first(std::span<const Scalar> w) const;   // pi_1
  Vector second(std::span<const Scalar> w) const;  // pi_2

  /// T^2 = -I and <<T a, b>> = <<a, T b>> on all basis pairs.
  bool check_operator_laws() const;

 private:
  std::size_t p_;
  std::shared_ptr<const InnerSpace> space_;
  Matrix t_;
};

}  // namespace flatform
