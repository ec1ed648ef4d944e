#include "flatform/instance_gen.hpp"

#include <random>

namespace flatform {

std::string to_string(Family f) {
  switch (f) {
    case Family::hypersurface_product: return "hypersurface_product";
    case Family::holomorphic: return "holomorphic";
    case Family::composition: return "composition";
    case Family::padded: return "padded";
    case Family::random_filtered: return "random_filtered";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (Family f : all_families()) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families = {Family::hypersurface_product, Family::holomorphic,
                                               Family::composition, Family::padded, Family::random_filtered};
  return families;
}

bool feasible(Family family, std::size_t n, std::size_t p) {
  if (n < 1 || p < 1) return false;
  switch (family) {
    case Family::hypersurface_product: return p <= n;
    case Family::holomorphic: return p >= 2;
    case Family::composition: return p >= 2 && p - 2 <= n;
    case Family::padded:
      return n >= 2 && (feasible(Family::hypersurface_product, n - 1, p) || feasible(Family::holomorphic, n - 1, p) ||
                        feasible(Family::composition, n - 1, p));
    case Family::random_filtered: return true;
  }
  return false;
}

bool passes_verification(const KaehlerPoint& kp) {
  return is_flat(build_gamma(kp)) && is_flat(build_beta(kp)) && check_compatibility(kp).beta_gamma;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Draw {
 public:
  Draw(std::uint64_t seed, long bound) : rng_(splitmix64(seed)), bound_(bound) {}

  std::size_t below(std::size_t m) { return static_cast<std::size_t>(rng_() % m); }
  /// Uniform on {-b, ..., b} \ {0}.
  long nonzero() {
    const long v = static_cast<long>(rng_() % static_cast<std::uint64_t>(2 * bound_));
    return v < bound_ ? v - bound_ : v - bound_ + 1;
  }
  std::uint64_t raw() { return rng_(); }

 private:
  std::mt19937_64 rng_;
  long bound_;
};

// Real 2 x 2n matrix of the complex-linear functional X -> sum_j c_j z_j,
// z_j = x_{2j} + i x_{2j+1}.
Matrix complex_functional(Draw& draw, std::size_t n) {
  Matrix l(2, 2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const long cr = draw.nonzero();
    const long ci = draw.nonzero();
    l(0, 2 * j) += cr;
    l(0, 2 * j + 1) -= ci;
    l(1, 2 * j) += ci;
    l(1, 2 * j + 1) += cr;
  }
  return l;
}

// Adds a(l X, l Y) to normal direction k; a is nondegenerate with nonzero trace.
void add_hypersurface_factor(BilinearMap& alpha, const Matrix& l, Draw& draw, std::size_t k) {
  long x = 0, y = 0, z = 0;
  do {
    x = draw.nonzero();
    y = draw.nonzero();
    z = draw.nonzero();
  } while (x * z - y * y == 0 || x + z == 0);
  const Scalar a[2][2] = {{x, y}, {y, z}};
  const std::size_t d = alpha.v1dim();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Scalar s = 0;
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t t = 0; t < 2; ++t) s += l(r, i) * a[r][t] * l(t, j);
      }
      if (flatform::is_zero(s)) continue;
      Vector v = alpha.at(i, j);
      v[k] += s;
      alpha.set(i, j, std::move(v));
    }
  }
}

// Real and imaginary parts of z^T M w for a complex symmetric M, written to
// normal directions (offset + 2k, offset + 2k + 1).
void add_holomorphic_block(BilinearMap& alpha, std::size_t n, std::size_t offset, std::size_t count, Draw& draw) {
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<std::vector<std::pair<long, long>>> m(n, std::vector<std::pair<long, long>>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) m[i][j] = m[j][i] = {draw.nonzero(), draw.nonzero()};
    }
    const std::size_t re = offset + 2 * k;
    const std::size_t im = re + 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const long mr = m[i][j].first;
        const long mi = m[i][j].second;
        // z_i z_j = (x_i x_j - y_i y_j) + i (x_i y_j + y_i x_j)
        const long re_terms[2][2] = {{mr, -mi}, {-mi, -mr}};
        const long im_terms[2][2] = {{mi, mr}, {mr, -mi}};
        for (std::size_t r = 0; r < 2; ++r) {
          for (std::size_t s = 0; s < 2; ++s) {
            Vector v = alpha.at(2 * i + r, 2 * j + s);
            v[re] += re_terms[r][s];
            v[im] += im_terms[r][s];
            alpha.set(2 * i + r, 2 * j + s, std::move(v));
          }
        }
      }
    }
  }
}

// Tangent signed permutation and normal Cayley rotation; both preserve every
// property the families are built for.
KaehlerPoint scramble(const KaehlerPoint& kp, Draw& draw) {
  const std::size_t d = 2 * kp.n();
  const std::size_t p = kp.p();
  std::vector<std::size_t> perm(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = i;
  for (std::size_t i = d; i > 1; --i) std::swap(perm[i - 1], perm[draw.below(i)]);
  Matrix s(d, d);
  for (std::size_t i = 0; i < d; ++i) s(perm[i], i) = draw.below(2) == 0 ? 1 : -1;
  const Matrix st = s.transpose();
  ComplexStructure j(s * kp.j().matrix() * st);
  BilinearMap alpha = kp.alpha().precompose(st, st);

  Matrix k(p, p);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) {
      const long v = static_cast<long>(draw.below(3)) - 1;
      k(a, b) = v;
      k(b, a) = -v;
    }
  }
  const Matrix id = Matrix::identity(p);
  const auto inv = inverse(id + k);
  const Matrix o = (id - k) * (*inv);
  alpha = alpha.post_compose(o, alpha.target_ptr());
  return KaehlerPoint::make(kp.n(), kp.p(), std::move(j), std::move(alpha));
}

struct Attempt {
  std::optional<KaehlerPoint> kp;
  std::size_t holomorphic_dim = 0;
  std::size_t factors = 0;
  std::optional<Family> base;
};

Attempt build(const FamilySpec& spec, Draw& draw);

// p hypersurface factors on independent complex-linear functionals, written
// to normal directions offset .. offset + m - 1.
bool add_hypersurface_product(BilinearMap& alpha, std::size_t n, std::size_t offset, std::size_t m, Draw& draw) {
  Matrix stacked(0, 2 * n);
  std::vector<Matrix> functionals;
  for (std::size_t k = 0; k < m; ++k) {
    functionals.push_back(complex_functional(draw, n));
    stacked = stacked.stack(functionals.back());
  }
  if (rank(stacked) != 2 * m) return false;
  for (std::size_t k = 0; k < m; ++k) add_hypersurface_factor(alpha, functionals[k], draw, offset + k);
  return true;
}

Attempt build(const FamilySpec& spec, Draw& draw) {
  const std::size_t n = spec.n;
  const std::size_t p = spec.p;
  const std::size_t d = 2 * n;
  Attempt out;
  BilinearMap alpha(d, d, InnerSpace::euclidean(p));
  switch (spec.family) {
    case Family::hypersurface_product:
      if (!add_hypersurface_product(alpha, n, 0, p, draw)) return out;
      out.factors = p;
      break;
    case Family::holomorphic:
      add_holomorphic_block(alpha, n, 0, p / 2, draw);
      out.holomorphic_dim = 2 * (p / 2);
      break;
    case Family::composition: {
      // l = 2, 4, ... holomorphic directions and at least one factor unless p = 2.
      std::size_t l = 2;
      if (p >= 5) l = 2 * (1 + draw.below((p - 1) / 2));
      if (p - l > n) l = p - n + ((p - n) % 2);
      const std::size_t m = p - l;
      add_holomorphic_block(alpha, n, 0, l / 2, draw);
      if (!add_hypersurface_product(alpha, n, l, m, draw)) return out;
      out.holomorphic_dim = l;
      out.factors = m;
      break;
    }
    case Family::padded: {
      std::vector<Family> bases;
      for (Family f : {Family::hypersurface_product, Family::holomorphic, Family::composition}) {
        if (feasible(f, n - 1, p)) bases.push_back(f);
      }
      FamilySpec base_spec = spec;
      base_spec.family = bases[draw.below(bases.size())];
      base_spec.n = n - 1;
      Attempt base = build(base_spec, draw);
      if (!base.kp) return out;
      const std::size_t bd = 2 * (n - 1);
      Matrix jm(d, d);
      for (std::size_t r = 0; r < bd; ++r) {
        for (std::size_t c = 0; c < bd; ++c) jm(r, c) = base.kp->j().matrix()(r, c);
      }
      jm(bd + 1, bd) = 1;
      jm(bd, bd + 1) = -1;
      for (std::size_t i = 0; i < bd; ++i) {
        for (std::size_t j = 0; j < bd; ++j) alpha.set(i, j, base.kp->alpha().at(i, j));
      }
      out.kp = KaehlerPoint::make(n, p, ComplexStructure(jm), std::move(alpha));
      out.holomorphic_dim = base.holomorphic_dim;
      out.factors = base.factors;
      out.base = base_spec.family;
      return out;
    }
    case Family::random_filtered:
      for (std::size_t k = 0; k < p; ++k) {
        const std::size_t nnz = 1 + draw.below(3);
        for (std::size_t t = 0; t < nnz; ++t) {
          const std::size_t i = draw.below(d);
          const std::size_t j = draw.below(d);
          const long v = draw.nonzero();
          Vector a = alpha.at(i, j);
          a[k] += v;
          alpha.set(i, j, a);
          if (i != j) alpha.set(j, i, std::move(a));
        }
      }
      break;
  }
  out.kp = KaehlerPoint::make(n, p, ComplexStructure::standard(n), std::move(alpha));
  return out;
}

}  // namespace

Generated gen(const FamilySpec& spec) {
  if (spec.coefficient_bound < 1) throw std::invalid_argument("coefficient_bound must be at least 1");
  if (!feasible(spec.family, spec.n, spec.p)) {
    throw std::invalid_argument("family " + to_string(spec.family) + " cannot be realized with n = " +
                                std::to_string(spec.n) + ", p = " + std::to_string(spec.p));
  }
  for (std::size_t attempt = 0; attempt < kRetryCap; ++attempt) {
    Draw draw(spec.seed + attempt, spec.coefficient_bound);
    Attempt a = build(spec, draw);
    if (!a.kp) continue;
    KaehlerPoint kp = scramble(*a.kp, draw);
    if (!passes_verification(kp)) continue;
    return Generated{std::move(kp), attempt + 1, a.holomorphic_dim, a.factors, a.base};
  }
  throw GenerationError("retry_cap_exceeded", "no instance of family " + to_string(spec.family) + " with n = " +
                                                  std::to_string(spec.n) + ", p = " + std::to_string(spec.p) +
                                                  " passed verification after " + std::to_string(kRetryCap) +
                                                  " sub-seeds starting at " + std::to_string(spec.seed));
}

}  // namespace flatform
