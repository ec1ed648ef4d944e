#include "flatform/complex_structure.hpp"

#include <stdexcept>
#include <utility>

namespace flatform {

bool squares_to_minus_identity(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  return m * m == -Matrix::identity(m.rows());
}

ComplexStructure::ComplexStructure(Matrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0)
    throw std::invalid_argument("complex structure must be an even-sized square matrix");
  if (!squares_to_minus_identity(matrix_)) throw std::invalid_argument("complex structure must satisfy J^2 = -I");
}

ComplexStructure ComplexStructure::standard(std::size_t complex_dim) {
  Matrix m(2 * complex_dim, 2 * complex_dim);
  for (std::size_t k = 0; k < complex_dim; ++k) {
    m(2 * k + 1, 2 * k) = 1;
    m(2 * k, 2 * k + 1) = -1;
  }
  return ComplexStructure(std::move(m));
}

bool ComplexStructure::is_isometric(const InnerSpace& space) const {
  if (space.dim() != dim()) throw std::invalid_argument("is_isometric: dimension mismatch");
  return matrix_.transpose() * space.gram() * matrix_ == space.gram();
}

Subspace complex_hull(const Subspace& s, const ComplexStructure& j) {
  return sum(s, map(j.matrix(), s, s.ambient_ptr()));
}

bool is_invariant(const Subspace& s, const ComplexStructure& j) {
  return s.contains(map(j.matrix(), s, s.ambient_ptr()));
}

Subspace complex_part(const Subspace& s, const ComplexStructure& j) {
  return intersect(s, map(j.matrix(), s, s.ambient_ptr()));
}

SplitSpace::SplitSpace(std::size_t p) : p_(p), space_(InnerSpace::split(p)), t_(2 * p, 2 * p) {
  // T(xi, eta) = (eta, -xi)
  for (std::size_t i = 0; i < p; ++i) {
    t_(i, p + i) = 1;
    t_(p + i, i) = -1;
  }
}

Vector SplitSpace::join(std::span<const Scalar> xi, std::span<const Scalar> eta) const {
  if (xi.size() != p_ || eta.size() != p_) throw std::invalid_argument("SplitSpace::join: dimension mismatch");
  Vector w(xi.begin(), xi.end());
  w.insert(w.end(), eta.begin(), eta.end());
  return w;
}

Vector SplitSpace::first(std::span<const Scalar> w) const { return Vector(w.begin(), w.begin() + p_); }

Vector SplitSpace::second(std::span<const Scalar> w) const { return Vector(w.begin() + p_, w.end()); }

bool SplitSpace::check_operator_laws() const {
  if (!squares_to_minus_identity(t_)) return false;
  // <<T a, b>> = <<a, T b>> for all basis vectors  <=>  T^T G = G T.
  const Matrix& g = space_->gram();
  return t_.transpose() * g == g * t_;
}

}  // namespace flatform
