#pragma once

#include "flatform/instance_gen.hpp"
#include "flatform/kaehler.hpp"

#include <random>
#include <vector>

namespace flatform::testing {

inline Vector vec(std::initializer_list<long> xs) {
  Vector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline Matrix rows(std::initializer_list<std::initializer_list<Scalar>> r) { return Matrix(r); }

inline KaehlerPoint zero_point(std::size_t n, std::size_t p) {
  return KaehlerPoint::make(n, p, ComplexStructure::standard(n), BilinearMap(2 * n, 2 * n, InnerSpace::euclidean(p)));
}

/// alpha_k(X, Y) = x_k^T A_k y_k on the k-th complex coordinate plane with
/// A_k = [[a, b], [b, c]], and the standard J. One factor per normal
/// direction, so a product of p hypersurface germs in C^n (p <= n).
struct Factor {
  long a, b, c;
};

inline KaehlerPoint plane_product(std::size_t n, const std::vector<Factor>& factors) {
  const std::size_t p = factors.size();
  BilinearMap alpha(2 * n, 2 * n, InnerSpace::euclidean(p));
  for (std::size_t k = 0; k < p; ++k) {
    const long m[2][2] = {{factors[k].a, factors[k].b}, {factors[k].b, factors[k].c}};
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t s = 0; s < 2; ++s) {
        Vector v = alpha.at(2 * k + r, 2 * k + s);
        v[k] = m[r][s];
        alpha.set(2 * k + r, 2 * k + s, std::move(v));
      }
    }
  }
  return KaehlerPoint::make(n, p, ComplexStructure::standard(n), std::move(alpha));
}

/// Holomorphic germ z -> (Re z_1^2, Im z_1^2) on C^n: alpha(X, JY) = J0 alpha(X, Y).
inline KaehlerPoint square_germ(std::size_t n) {
  BilinearMap alpha(2 * n, 2 * n, InnerSpace::euclidean(2));
  alpha.set(0, 0, vec({1, 0}));
  alpha.set(1, 1, vec({-1, 0}));
  alpha.set(0, 1, vec({0, 1}));
  alpha.set(1, 0, vec({0, 1}));
  return KaehlerPoint::make(n, 2, ComplexStructure::standard(n), std::move(alpha));
}

/// Test-side evaluation of phi(x, y) straight from the tensor entries.
inline Vector evaluate(const BilinearMap& phi, const Vector& x, const Vector& y) {
  Vector out(phi.wdim());
  for (std::size_t i = 0; i < phi.v1dim(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < phi.v2dim(); ++j) {
      if (y[j] == 0) continue;
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += x[i] * y[j] * phi.at(i, j)[k];
    }
  }
  return out;
}

inline Scalar split_pair(const Vector& a, const Vector& b) {
  const std::size_t p = a.size() / 2;
  Scalar s = 0;
  for (std::size_t k = 0; k < p; ++k) s += a[k] * b[k] - a[p + k] * b[p + k];
  return s;
}

/// A small set of generated instances covering every family.
inline std::vector<Generated> small_corpus(std::uint64_t seed, std::size_t per_family = 2) {
  std::vector<Generated> out;
  const std::pair<std::size_t, std::size_t> shapes[] = {{3, 2}, {4, 2}, {4, 3}};
  for (Family f : all_families()) {
    for (auto [n, p] : shapes) {
      if (!feasible(f, n, p)) continue;
      for (std::size_t s = 0; s < per_family; ++s) out.push_back(gen(FamilySpec{f, n, p, seed + 31 * s}));
    }
  }
  return out;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long bound) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      m(i, j) = static_cast<long>(rng() % static_cast<std::uint64_t>(2 * bound + 1)) - bound;
    }
  }
  return m;
}

}  // namespace flatform::testing
