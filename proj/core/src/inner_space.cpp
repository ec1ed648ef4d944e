#include "flatform/inner_space.hpp"

#include <stdexcept>
#include <utility>

namespace flatform {

InnerSpace::InnerSpace(Matrix gram) : gram_(std::move(gram)) {
  if (!gram_.is_symmetric()) throw std::invalid_argument("InnerSpace: Gram matrix must be symmetric");
}

std::shared_ptr<const InnerSpace> InnerSpace::euclidean(std::size_t dim) {
  return std::make_shared<const InnerSpace>(Matrix::identity(dim));
}

std::shared_ptr<const InnerSpace> InnerSpace::split(std::size_t p) {
  Matrix g(2 * p, 2 * p);
  for (std::size_t i = 0; i < p; ++i) {
    g(i, i) = 1;
    g(p + i, p + i) = -1;
  }
  return std::make_shared<const InnerSpace>(std::move(g));
}

Scalar InnerSpace::pair(std::span<const Scalar> u, std::span<const Scalar> v) const {
  if (u.size() != dim() || v.size() != dim()) throw std::invalid_argument("pair: dimension mismatch");
  return dot(u, gram_.apply(v));
}

Matrix InnerSpace::gram_of(const Matrix& rows) const {
  if (rows.rows() == 0) return Matrix(0, 0);
  return rows * gram_ * rows.transpose();
}

Signature InnerSpace::signature() const { return signature_of(gram_); }

Signature signature_of(const Matrix& symmetric) {
  if (!symmetric.is_symmetric()) throw std::invalid_argument("signature_of: matrix not symmetric");
  Matrix a = symmetric;
  const std::size_t n = a.rows();
  Signature sig;
  std::size_t k = 0;
  // Active block is a(k.., k..); each step peels off one diagonal entry.
  while (k < n) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i) {
      if (sgn(a(i, i)) != 0) {
        piv = i;
        break;
      }
    }
    if (piv == n) {
      // Zero diagonal: find an off-diagonal entry and replace e_k by e_k + e_j.
      std::size_t ri = n, rj = n;
      for (std::size_t i = k; i < n && ri == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (sgn(a(i, j)) != 0) {
            ri = i;
            rj = j;
            break;
          }
      if (ri == n) {
        sig.null += n - k;
        break;
      }
      // row/col ri += row/col rj; new diagonal = 2 a(ri, rj) != 0.
      for (std::size_t c = 0; c < n; ++c) a(ri, c) += a(rj, c);
      for (std::size_t r = 0; r < n; ++r) a(r, ri) += a(r, rj);
      piv = ri;
    }
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(a(r, k), a(r, piv));
    }
    const Scalar d = a(k, k);
    (sgn(d) > 0 ? sig.positive : sig.negative) += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a(i, k)) == 0) continue;
      const Scalar f = a(i, k) / d;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (sgn(a(k, j)) == 0) continue;
      const Scalar f = a(k, j) / d;
      for (std::size_t i = k; i < n; ++i) a(i, j) -= f * a(i, k);
    }
    ++k;
  }
  return sig;
}

Subspace::Subspace(AmbientPtr ambient) : ambient_(std::move(ambient)), basis_(0, ambient_->dim()) {}

Subspace::Subspace(AmbientPtr ambient, Matrix basis) : ambient_(std::move(ambient)), basis_(std::move(basis)) {
  if (basis_.rows() == 0) basis_ = Matrix(0, ambient_->dim());
}

Subspace Subspace::from_basis(AmbientPtr ambient, Matrix basis) {
  if (basis.rows() > 0 && basis.cols() != ambient->dim())
    throw std::invalid_argument("Subspace: basis vectors do not match the ambient dimension");
  if (rank(basis) != basis.rows()) throw std::invalid_argument("Subspace: basis vectors are linearly dependent");
  return Subspace(std::move(ambient), std::move(basis));
}

Subspace Subspace::span(AmbientPtr ambient, const Matrix& generators) {
  if (generators.rows() == 0) return Subspace(std::move(ambient));
  if (generators.cols() != ambient->dim())
    throw std::invalid_argument("Subspace: generators do not match the ambient dimension");
  auto keep = independent_rows(generators);
  return Subspace(std::move(ambient), generators.select_rows(keep));
}

Subspace Subspace::whole(AmbientPtr ambient) {
  const std::size_t d = ambient->dim();
  return Subspace(std::move(ambient), Matrix::identity(d));
}

bool Subspace::contains(std::span<const Scalar> v) const {
  if (v.size() != ambient_dim()) throw std::invalid_argument("contains: dimension mismatch");
  if (is_zero(v)) return true;
  Matrix m = basis_;
  m.append_row(v);
  return rank(m) == dim();
}

bool Subspace::contains(const Subspace& other) const {
  if (!(other.ambient() == ambient())) throw std::invalid_argument("contains: ambient mismatch");
  if (other.dim() == 0) return true;
  return rank(basis_.stack(other.basis_)) == dim();
}

bool Subspace::same_as(const Subspace& other) const { return other.dim() == dim() && contains(other); }

Subspace perp(const Subspace& s) {
  if (s.dim() == 0) return Subspace::whole(s.ambient_ptr());
  Matrix constraints = s.basis() * s.ambient().gram();
  return Subspace::from_basis(s.ambient_ptr(), kernel(constraints));
}

Subspace radical(const Subspace& s) { return intersect(s, perp(s)); }

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (!(a.ambient() == b.ambient())) throw std::invalid_argument("intersect: ambient mismatch");
  if (a.dim() == 0 || b.dim() == 0) return Subspace(a.ambient_ptr());
  // Solve sum_i x_i a_i - sum_j y_j b_j = 0; intersection vectors are sum_i x_i a_i.
  const std::size_t n = a.ambient_dim();
  Matrix system(n, a.dim() + b.dim());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < a.dim(); ++i) system(r, i) = a.basis()(i, r);
    for (std::size_t j = 0; j < b.dim(); ++j) system(r, a.dim() + j) = -b.basis()(j, r);
  }
  Matrix k = kernel(system);
  Matrix gens(k.rows(), n);
  for (std::size_t t = 0; t < k.rows(); ++t) {
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (sgn(k(t, i)) == 0) continue;
      for (std::size_t c = 0; c < n; ++c) gens(t, c) += k(t, i) * a.basis()(i, c);
    }
  }
  return Subspace::span(a.ambient_ptr(), gens);
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (!(a.ambient() == b.ambient())) throw std::invalid_argument("sum: ambient mismatch");
  return Subspace::span(a.ambient_ptr(), a.basis().stack(b.basis()));
}

Subspace map(const Matrix& linear, const Subspace& s, Subspace::AmbientPtr target) {
  if (linear.cols() != s.ambient_dim() || linear.rows() != target->dim())
    throw std::invalid_argument("map: dimension mismatch");
  if (s.dim() == 0) return Subspace(std::move(target));
  return Subspace::span(std::move(target), s.basis() * linear.transpose());
}

Matrix orthogonal_projector(const Subspace& s) {
  const std::size_t n = s.ambient_dim();
  if (s.dim() == 0) return Matrix(n, n);
  auto inv = inverse(s.gram());
  if (!inv) throw std::invalid_argument("orthogonal_projector: subspace is degenerate");
  // P w = B^T (B G B^T)^{-1} B G w
  const Matrix& b = s.basis();
  return b.transpose() * (*inv) * b * s.ambient().gram();
}

bool is_isotropic(const Subspace& s) { return s.gram().is_zero(); }

bool is_degenerate(const Subspace& s) { return s.dim() > 0 && rank(s.gram()) < s.dim(); }

Decomposition decompose(const Subspace& l) {
  const auto& space = l.ambient();
  if (rank(space.gram()) != space.dim()) throw std::invalid_argument("decompose: ambient inner product is degenerate");

  Subspace rad = radical(l);
  const std::size_t r = rad.dim();
  const std::size_t n = l.ambient_dim();
  if (r == 0) {
    Subspace zero(l.ambient_ptr());
    return {zero, zero, Subspace::whole(l.ambient_ptr())};
  }

  // Hyperbolic partners: <<xi_j, w_i>> = delta_ij.
  Matrix pairing = rad.basis() * space.gram();  // r x n
  auto partners = solve(pairing, Matrix::identity(r));
  if (!partners) throw std::logic_error("decompose: radical basis is not independent");
  Matrix w = partners->transpose();  // rows w_i

  // Clear the Gram matrix among the partners using the radical vectors.
  Matrix ww = space.gram_of(w);
  Matrix dual(r, n);
  const Scalar half(1, 2);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t c = 0; c < n; ++c) dual(i, c) = w(i, c);
    for (std::size_t j = 0; j < r; ++j) {
      if (sgn(ww(i, j)) == 0) continue;
      const Scalar f = half * ww(i, j);
      for (std::size_t c = 0; c < n; ++c) dual(i, c) -= f * rad.basis()(j, c);
    }
  }
  Subspace dual_space = Subspace::from_basis(l.ambient_ptr(), std::move(dual));
  Subspace rest = perp(sum(rad, dual_space));
  return {std::move(rad), std::move(dual_space), std::move(rest)};
}

}  // namespace flatform
