#include "flatform/bilinear.hpp"

#include <random>
#include <utility>

namespace flatform {

BilinearMap::BilinearMap(std::size_t v1dim, std::size_t v2dim, SpacePtr target)
    : v1dim_(v1dim),
      v2dim_(v2dim),
      target_(std::move(target)),
      v1_space_(InnerSpace::euclidean(v1dim)),
      v2_space_(v1dim == v2dim ? v1_space_ : InnerSpace::euclidean(v2dim)),
      values_(v1dim * v2dim, Vector(target_->dim())) {}

void BilinearMap::set(std::size_t i, std::size_t j, Vector value) {
  if (value.size() != wdim()) throw std::invalid_argument("BilinearMap::set: wrong target dimension");
  values_[i * v2dim_ + j] = std::move(value);
}

Vector BilinearMap::operator()(std::span<const Scalar> x, std::span<const Scalar> y) const {
  Vector out(wdim());
  for (std::size_t i = 0; i < v1dim_; ++i) {
    if (flatform::is_zero(x[i])) continue;
    for (std::size_t j = 0; j < v2dim_; ++j) {
      if (flatform::is_zero(y[j])) continue;
      const Scalar c = x[i] * y[j];
      const Vector& v = at(i, j);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * v[k];
    }
  }
  return out;
}

Matrix BilinearMap::partial(std::span<const Scalar> x) const {
  Matrix m(wdim(), v2dim_);
  for (std::size_t i = 0; i < v1dim_; ++i) {
    if (flatform::is_zero(x[i])) continue;
    for (std::size_t j = 0; j < v2dim_; ++j) {
      const Vector& v = at(i, j);
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (!flatform::is_zero(v[k])) m(k, j) += x[i] * v[k];
      }
    }
  }
  return m;
}

Matrix BilinearMap::value_rows() const { return Matrix::from_rows(values_, wdim()); }

Matrix BilinearMap::pairing_table() const {
  const Matrix rows = value_rows();
  return rows * target_->gram() * rows.transpose();
}

bool BilinearMap::is_symmetric() const {
  if (v1dim_ != v2dim_) return false;
  for (std::size_t i = 0; i < v1dim_; ++i) {
    for (std::size_t j = i + 1; j < v2dim_; ++j) {
      if (at(i, j) != at(j, i)) return false;
    }
  }
  return true;
}

bool BilinearMap::is_zero() const {
  for (const Vector& v : values_) {
    if (!flatform::is_zero(std::span<const Scalar>(v))) return false;
  }
  return true;
}

BilinearMap BilinearMap::post_compose(const Matrix& linear, SpacePtr new_target) const {
  if (linear.cols() != wdim() || linear.rows() != new_target->dim()) {
    throw std::invalid_argument("BilinearMap::post_compose: shape mismatch");
  }
  BilinearMap out(v1dim_, v2dim_, std::move(new_target));
  for (std::size_t idx = 0; idx < values_.size(); ++idx) out.values_[idx] = linear.apply(values_[idx]);
  return out;
}

BilinearMap BilinearMap::restrict_right(const Matrix& basis) const {
  if (basis.cols() != v2dim_) throw std::invalid_argument("BilinearMap::restrict_right: shape mismatch");
  BilinearMap out(v1dim_, basis.rows(), target_);
  Vector e(v1dim_);
  for (std::size_t i = 0; i < v1dim_; ++i) {
    e.assign(v1dim_, Scalar(0));
    e[i] = 1;
    for (std::size_t r = 0; r < basis.rows(); ++r) out.values_[i * basis.rows() + r] = (*this)(e, basis.row(r));
  }
  return out;
}

BilinearMap BilinearMap::precompose(const Matrix& a, const Matrix& b) const {
  if (a.rows() != v1dim_ || a.cols() != v1dim_ || b.rows() != v2dim_ || b.cols() != v2dim_) {
    throw std::invalid_argument("BilinearMap::precompose: shape mismatch");
  }
  BilinearMap out(v1dim_, v2dim_, target_);
  for (std::size_t i = 0; i < v1dim_; ++i) {
    for (std::size_t j = 0; j < v2dim_; ++j) out.values_[i * v2dim_ + j] = (*this)(a.column(i), b.column(j));
  }
  return out;
}

namespace {

void require_same_shape(const BilinearMap& a, const BilinearMap& b) {
  if (a.v1dim() != b.v1dim() || a.v2dim() != b.v2dim() || !(a.target() == b.target())) {
    throw std::invalid_argument("BilinearMap: shape or target mismatch");
  }
}

}  // namespace

BilinearMap operator+(const BilinearMap& a, const BilinearMap& b) {
  require_same_shape(a, b);
  BilinearMap out = a;
  for (std::size_t idx = 0; idx < out.values_.size(); ++idx) {
    for (std::size_t k = 0; k < out.wdim(); ++k) out.values_[idx][k] += b.values_[idx][k];
  }
  return out;
}

BilinearMap operator-(const BilinearMap& a, const BilinearMap& b) {
  require_same_shape(a, b);
  BilinearMap out = a;
  for (std::size_t idx = 0; idx < out.values_.size(); ++idx) {
    for (std::size_t k = 0; k < out.wdim(); ++k) out.values_[idx][k] -= b.values_[idx][k];
  }
  return out;
}

BilinearMap operator*(const Scalar& s, const BilinearMap& phi) {
  BilinearMap out = phi;
  for (auto& v : out.values_) {
    for (auto& c : v) c *= s;
  }
  return out;
}

bool operator==(const BilinearMap& a, const BilinearMap& b) {
  return a.v1dim_ == b.v1dim_ && a.v2dim_ == b.v2dim_ && *a.target_ == *b.target_ && a.values_ == b.values_;
}

Subspace image(const BilinearMap& phi) { return Subspace::span(phi.target_ptr(), phi.value_rows()); }

Subspace nullity(const BilinearMap& phi) {
  // Rows indexed by (i, k): sum_j phi(e_i, f_j)[k] y_j = 0.
  Matrix system(phi.v1dim() * phi.wdim(), phi.v2dim());
  for (std::size_t i = 0; i < phi.v1dim(); ++i) {
    for (std::size_t j = 0; j < phi.v2dim(); ++j) {
      const Vector& v = phi.at(i, j);
      for (std::size_t k = 0; k < v.size(); ++k) system(i * phi.wdim() + k, j) = v[k];
    }
  }
  return Subspace::from_basis(phi.v2_space(), kernel(system));
}

Subspace partial_kernel(const BilinearMap& phi, std::span<const Scalar> x) {
  return Subspace::from_basis(phi.v2_space(), kernel(phi.partial(x)));
}

Subspace partial_image(const BilinearMap& phi, std::span<const Scalar> x) {
  return Subspace::span(phi.target_ptr(), phi.partial(x).transpose());
}

Subspace u_space(const BilinearMap& phi, std::span<const Scalar> x) { return radical(partial_image(phi, x)); }

Subspace l_space(const BilinearMap& phi, std::span<const Scalar> x) {
  const Matrix n = kernel(phi.partial(x));
  Matrix generators(0, phi.wdim());
  Vector e(phi.v1dim());
  for (std::size_t i = 0; i < phi.v1dim(); ++i) {
    e.assign(phi.v1dim(), Scalar(0));
    e[i] = 1;
    for (std::size_t r = 0; r < n.rows(); ++r) generators.append_row(phi(e, n.row(r)));
  }
  return Subspace::span(phi.target_ptr(), generators);
}

bool satisfies_exchange(const BilinearMap& phi, const BilinearMap& psi) {
  require_same_shape(phi, psi);
  const Matrix table = phi.value_rows() * phi.target().gram() * psi.value_rows().transpose();
  const std::size_t v2 = phi.v2dim();
  for (std::size_t i = 0; i < phi.v1dim(); ++i) {
    for (std::size_t k = 0; k < phi.v1dim(); ++k) {
      for (std::size_t j = 0; j < v2; ++j) {
        for (std::size_t l = j + 1; l < v2; ++l) {
          if (table(i * v2 + j, k * v2 + l) != table(i * v2 + l, k * v2 + j)) return false;
        }
      }
    }
  }
  return true;
}

bool is_flat(const BilinearMap& phi) {
  // The pairing table is symmetric, so k >= i suffices.
  const Matrix table = phi.pairing_table();
  const std::size_t v2 = phi.v2dim();
  for (std::size_t i = 0; i < phi.v1dim(); ++i) {
    for (std::size_t k = i; k < phi.v1dim(); ++k) {
      for (std::size_t j = 0; j < v2; ++j) {
        for (std::size_t l = j + 1; l < v2; ++l) {
          if (table(i * v2 + j, k * v2 + l) != table(i * v2 + l, k * v2 + j)) return false;
        }
      }
    }
  }
  return true;
}

bool is_null(const BilinearMap& phi) { return phi.pairing_table().is_zero(); }

namespace {

std::size_t rank_at(const BilinearMap& phi, std::span<const Scalar> x) { return rank(phi.partial(x)); }

// Seeded integer points with coordinates in {-3, ..., 3}. The modulus keeps
// the sequence identical across standard library implementations.
std::vector<Vector> sample_points(std::size_t dim, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Vector v(dim);
    for (auto& c : v) c = static_cast<long>(rng() % 7) - 3;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

RegularElementCertificate certify_at(const BilinearMap& phi, std::span<const Scalar> x) {
  RegularElementCertificate c;
  c.vector.assign(x.begin(), x.end());
  c.attained_rank = rank_at(phi, x);
  c.kappa = c.attained_rank;
  c.tau_at_x = u_space(phi, x).dim();
  c.sigma_at_x = l_space(phi, x).dim();
  c.candidates = 1;
  return c;
}

RegularElementCertificate kappa(const BilinearMap& phi, std::uint64_t seed) {
  const std::size_t d = phi.v1dim();
  std::vector<Vector> points = sample_points(d, seed, kRegularSamples);
  for (std::size_t i = 0; i < d; ++i) {
    Vector e(d);
    e[i] = 1;
    points.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      Vector e(d);
      e[i] = 1;
      e[j] = 1;
      points.push_back(std::move(e));
    }
  }

  std::vector<std::size_t> ranks(points.size());
  std::size_t best = 0;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    ranks[idx] = rank_at(phi, points[idx]);
    best = std::max(best, ranks[idx]);
  }

  // Regular candidates in sampling order; random samples come first.
  std::vector<std::size_t> regular;
  for (std::size_t idx = 0; idx < points.size() && regular.size() < kTauSigmaCandidates; ++idx) {
    if (ranks[idx] == best) regular.push_back(idx);
  }

  RegularElementCertificate result;
  bool have = false;
  for (std::size_t idx : regular) {
    RegularElementCertificate c;
    c.vector = points[idx];
    c.attained_rank = best;
    c.kappa = best;
    c.tau_at_x = u_space(phi, points[idx]).dim();
    if (have && c.tau_at_x > result.tau_at_x) continue;
    c.sigma_at_x = l_space(phi, points[idx]).dim();
    if (!have || c.tau_at_x < result.tau_at_x || c.sigma_at_x < result.sigma_at_x) {
      result = std::move(c);
      have = true;
    }
  }
  if (!have) result.vector.assign(d, Scalar(0));  // d == 0
  result.seed = seed;
  result.candidates = points.size();
  return result;
}

bool is_t_compatible(const BilinearMap& phi, const ComplexStructure& j, const SplitSpace& split) {
  if (phi.v2dim() != j.dim() || phi.wdim() != split.dim()) return false;
  const Matrix& jm = j.matrix();
  for (std::size_t a = 0; a < phi.v1dim(); ++a) {
    for (std::size_t b = 0; b < phi.v2dim(); ++b) {
      // phi(e_a, J e_b) = sum_c J(c, b) phi(e_a, e_c)
      Vector rhs(phi.wdim());
      for (std::size_t c = 0; c < phi.v2dim(); ++c) {
        if (is_zero(jm(c, b))) continue;
        const Vector& v = phi.at(a, c);
        for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += jm(c, b) * v[k];
      }
      if (split.apply_t(phi.at(a, b)) != rhs) return false;
    }
  }
  return true;
}

PluriharmonicBound pluriharmonic_bound_check(const BilinearMap& phi, const ComplexStructure& j,
                                             const SplitSpace& split, std::uint64_t seed) {
  if (!phi.is_symmetric()) throw PreconditionViolation("pluriharmonic_bound_check: form is not symmetric");
  if (phi.v1dim() != j.dim()) throw PreconditionViolation("pluriharmonic_bound_check: J has the wrong dimension");
  if (!(phi.target() == *split.space())) {
    throw PreconditionViolation("pluriharmonic_bound_check: form is not valued in W^{p,p}");
  }
  if (!is_t_compatible(phi, j, split)) {
    throw PreconditionViolation("pluriharmonic_bound_check: T phi(X,Y) != phi(X,JY)");
  }
  PluriharmonicBound out;
  out.image_dim = image(phi).dim();
  out.kappa = kappa(phi, seed).kappa;
  out.holds = 4 * out.image_dim <= out.kappa * (out.kappa + 2);
  return out;
}

std::vector<Subspace> kernel_chain(const BilinearMap& phi, const std::vector<Vector>& pivots) {
  if (pivots.empty()) throw std::invalid_argument("kernel_chain: pivots must be nonempty");
  std::vector<Subspace> chain;
  Matrix current = kernel(phi.partial(pivots.front()));
  chain.push_back(Subspace::from_basis(phi.v2_space(), current));
  for (std::size_t k = 1; k < pivots.size(); ++k) {
    if (current.empty()) {
      chain.push_back(chain.back());
      continue;
    }
    // y = c^T current; phi_Z(y) = partial(Z) current^T c.
    const Matrix coeffs = kernel(phi.partial(pivots[k]) * current.transpose());
    current = coeffs.empty() ? Matrix(0, phi.v2dim()) : coeffs * current;
    chain.push_back(Subspace::from_basis(phi.v2_space(), current));
  }
  return chain;
}

}  // namespace flatform
