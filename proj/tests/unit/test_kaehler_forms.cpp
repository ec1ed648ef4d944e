#include "flatform/kaehler.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace flatform;
using flatform::testing::evaluate;
using flatform::testing::plane_product;
using flatform::testing::split_pair;
using flatform::testing::square_germ;
using flatform::testing::vec;
using flatform::testing::zero_point;

namespace {

// alpha(e0,e0) = 1, alpha(e0,e1) = 0, alpha(e1,e1) = c on C with J e0 = e1.
KaehlerPoint one_dim(long c) {
  BilinearMap alpha(2, 2, InnerSpace::euclidean(1));
  alpha.set(0, 0, vec({1}));
  alpha.set(1, 1, vec({c}));
  return KaehlerPoint::make(1, 1, ComplexStructure::standard(1), std::move(alpha));
}

}  // namespace

TEST(Gamma, ZeroAlpha) { EXPECT_TRUE(build_gamma(zero_point(2, 2)).is_zero()); }

TEST(Gamma, HandExpansionOneDimensional) {
  const BilinearMap g = build_gamma(one_dim(0));
  EXPECT_EQ(g.at(0, 0), vec({1, 0}));
  // gamma(X1, JX1) = (alpha(X1,JX1), alpha(X1,-X1)) = (0, -1)
  EXPECT_EQ(g.at(0, 1), vec({0, -1}));
}

TEST(Gamma, HolomorphicIsNull) { EXPECT_TRUE(is_null(build_gamma(square_germ(3)))); }

TEST(Beta, PluriharmonicVanishes) {
  const KaehlerPoint kp = square_germ(2);
  ASSERT_TRUE(is_pluriharmonic(kp));
  EXPECT_TRUE(build_beta(kp).is_zero());
}

TEST(Beta, SingleHypersurfaceGerm) {
  const KaehlerPoint kp = plane_product(3, {{2, 1, 1}});
  EXPECT_EQ(kappa(build_beta(kp), 1).kappa, 2u);
}

TEST(Beta, HandExpansionOneDimensional) {
  // beta(X1,X1) = (alpha(X1,X1) + alpha(JX1,JX1), alpha(X1,JX1) - alpha(JX1,X1)) = (2, 0)
  EXPECT_EQ(build_beta(one_dim(1)).at(0, 0), vec({2, 0}));
}

TEST(Theta, PluriharmonicIsTwiceGamma) {
  const KaehlerPoint kp = square_germ(2);
  EXPECT_EQ(build_theta(kp), Scalar(2) * build_gamma(kp));
}

TEST(Theta, JInvariantPartOnly) {
  // A = I on the plane: alpha(JX,JY) = alpha(X,Y), so theta = 0.
  EXPECT_TRUE(build_theta(plane_product(1, {{1, 0, 1}})).is_zero());
}

TEST(Theta, SumIdentity) {
  for (const Generated& g : flatform::testing::small_corpus(3, 1)) {
    EXPECT_EQ(Scalar(2) * build_gamma(g.kp), build_beta(g.kp) + build_theta(g.kp));
  }
}

TEST(Compatibility, ZeroBetaAndGenerated) {
  EXPECT_TRUE(check_compatibility(square_germ(2)).beta_gamma);
  const Generated g = gen(FamilySpec{Family::hypersurface_product, 4, 2, 8});
  const auto c = check_compatibility(g.kp);
  EXPECT_TRUE(c.beta_gamma);
  EXPECT_TRUE(c.beta_theta);
}

// Negative search: random sparse alpha with flat gamma that violates the
// beta/gamma exchange identity. Flat gamma forces compatibility, so the
// search is expected to come back empty; the test records that.
TEST(Compatibility, AdversarialSearchFindsNoViolation) {
  std::mt19937_64 rng(77);
  std::size_t flat_found = 0;
  std::size_t violations = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2;
    const std::size_t p = 1 + rng() % 2;
    BilinearMap alpha(2 * n, 2 * n, InnerSpace::euclidean(p));
    const std::size_t nnz = 1 + rng() % 3;
    for (std::size_t t = 0; t < nnz; ++t) {
      const std::size_t i = rng() % (2 * n), j = rng() % (2 * n), k = rng() % p;
      Vector v = alpha.at(i, j);
      v[k] += static_cast<long>(rng() % 5) - 2;
      alpha.set(i, j, v);
      alpha.set(j, i, v);
    }
    const KaehlerPoint kp = KaehlerPoint::make(n, p, ComplexStructure::standard(n), std::move(alpha));
    if (!is_flat(build_gamma(kp))) continue;
    ++flat_found;
    if (!check_compatibility(kp).beta_gamma) ++violations;
  }
  EXPECT_GT(flat_found, 20u);
  EXPECT_EQ(violations, 0u);
}

TEST(PluriharmonicNullity, Examples) {
  EXPECT_EQ(pluriharmonic_nullity(square_germ(3)).dim(), 6u);
  const KaehlerPoint prod = plane_product(4, {{2, 1, 1}, {1, 0, 3}});
  const Subspace ph = pluriharmonic_nullity(prod);
  EXPECT_EQ(ph.dim(), 2u * 4 - 2u * 2);
  EXPECT_TRUE(ph.same_as(nullity(build_beta(prod))));
  EXPECT_TRUE(is_invariant(ph, prod.j()));
  const Generated h = gen(FamilySpec{Family::holomorphic, 3, 4, 2});
  EXPECT_EQ(pluriharmonic_nullity(h.kp).dim(), 6u);
}

TEST(NullityIntersection, Examples) {
  EXPECT_TRUE(nullity_intersection_identity(zero_point(2, 1)));
  EXPECT_EQ(nullity(build_gamma(zero_point(2, 1))).dim(), 4u);
  EXPECT_TRUE(nullity_intersection_identity(square_germ(2)));
  const Generated g = gen(FamilySpec{Family::composition, 4, 3, 1});
  EXPECT_TRUE(nullity_intersection_identity(g.kp));
}

TEST(SBeta, Examples) {
  const auto zero = sbeta_identities(square_germ(2));
  EXPECT_EQ(zero.s, 0u);
  EXPECT_TRUE(zero.image_is_double);
  EXPECT_TRUE(zero.nullity_matches);

  const KaehlerPoint germ = plane_product(2, {{2, 1, 1}});
  const auto one = sbeta_identities(germ);
  EXPECT_EQ(one.s, 1u);
  EXPECT_EQ(image(build_beta(germ)).dim(), 2u);
  EXPECT_TRUE(one.image_is_double);

  const auto prod = sbeta_identities(plane_product(3, {{2, 1, 1}, {1, 0, 3}}));
  EXPECT_TRUE(prod.nullity_matches);
  EXPECT_TRUE(prod.image_is_double);
}

TEST(Diagonalization, ZeroBeta) {
  const auto d = diagonalize_beta(square_germ(2), 0);
  EXPECT_EQ(d.kappa, 0u);
  EXPECT_EQ(d.nullity.dim(), 4u);
  EXPECT_EQ(d.status, DiagonalizationStatus::kappa_deficient);
}

namespace {

// Checks (i)-(iii) from the returned frame with test-side arithmetic.
void expect_diagonal_frame(const KaehlerPoint& kp, const BetaDiagonalization& d) {
  const std::size_t n = kp.n(), p = kp.p();
  const BilinearMap beta = build_beta(kp);
  ASSERT_EQ(d.frame.size(), n);
  std::vector<Vector> basis;
  for (const Vector& x : d.frame) {
    basis.push_back(x);
    basis.push_back(kp.j().apply(x));
  }
  EXPECT_EQ(rank(Matrix::from_rows(basis, 2 * n)), 2 * n);
  // (i)
  std::vector<Vector> tail(basis.begin() + 2 * p, basis.end());
  EXPECT_TRUE(Subspace::span(beta.v2_space(), Matrix::from_rows(tail, 2 * n)).same_as(nullity(beta)));
  // (ii)
  for (std::size_t a = 0; a < 2 * n; ++a) {
    for (std::size_t b = 0; b < 2 * n; ++b) {
      if (a / 2 == b / 2) continue;
      EXPECT_EQ(evaluate(beta, basis[a], basis[b]), Vector(2 * p)) << a << "," << b;
    }
  }
  // (iii): Gram of {beta(X_j,X_j), beta(X_j,JX_j)} is diag(c_j, -c_j).
  std::vector<Vector> values;
  for (std::size_t j = 0; j < p; ++j) {
    values.push_back(evaluate(beta, basis[2 * j], basis[2 * j]));
    values.push_back(evaluate(beta, basis[2 * j], basis[2 * j + 1]));
  }
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = 0; b < values.size(); ++b) {
      const Scalar g = split_pair(values[a], values[b]);
      if (a != b) {
        EXPECT_EQ(g, 0);
      } else if (d.unit_scaling) {
        EXPECT_EQ(g, a % 2 == 0 ? 1 : -1);
      } else {
        EXPECT_EQ(sgn(g), a % 2 == 0 ? 1 : -1);
      }
    }
  }
  if (!d.unit_scaling) {
    ASSERT_TRUE(d.float_witness_error.has_value());
    EXPECT_LE(*d.float_witness_error, 1e-12);
  }
}

}  // namespace

TEST(Diagonalization, ProductOfTwoGerms) {
  // A_1 = I scales to an orthonormal pair exactly; A_2 = [[2,1],[1,1]] is generic.
  for (const auto& factors : {std::vector<flatform::testing::Factor>{{1, 0, 1}, {3, 0, 3}},
                              std::vector<flatform::testing::Factor>{{2, 1, 1}, {1, 0, 3}}}) {
    const KaehlerPoint kp = plane_product(2, factors);
    const auto d = diagonalize_beta(kp, 4);
    EXPECT_EQ(d.kappa, 4u);
    ASSERT_TRUE(d.status == DiagonalizationStatus::ok) << to_string(d.status) << " " << d.detail;
    EXPECT_TRUE(d.nullity_split && d.cross_terms_zero && d.gram_ok);
    expect_diagonal_frame(kp, d);
  }
}

TEST(Diagonalization, GeneratedProducts) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Generated g = gen(FamilySpec{Family::hypersurface_product, 3, 2, seed});
    const auto d = diagonalize_beta(g.kp, seed);
    EXPECT_EQ(nullity(build_beta(g.kp)).dim(), 6 - d.kappa);
    if (d.status == DiagonalizationStatus::ok) {
      expect_diagonal_frame(g.kp, d);
    } else {
      EXPECT_EQ(d.status, DiagonalizationStatus::irrational_frame) << d.detail;
      EXPECT_TRUE(d.gram_ok);
      ASSERT_TRUE(d.float_witness_error.has_value());
      EXPECT_LE(*d.float_witness_error, 1e-12);
    }
  }
}

// T1/T2/T3, symmetry <=> pluriharmonicity, gamma flat => theta flat and the
// parity facts on every corpus instance.
TEST(KaehlerProperty, FormIdentities) {
  for (const Generated& g : flatform::testing::small_corpus(100, 1)) {
    const KaehlerPoint& kp = g.kp;
    const SplitSpace split(kp.p());
    const BilinearMap gamma = build_gamma(kp), beta = build_beta(kp), theta = build_theta(kp);
    EXPECT_TRUE(is_t_compatible(gamma, kp.j(), split));
    EXPECT_TRUE(is_t_compatible(beta, kp.j(), split));
    EXPECT_TRUE(is_t_compatible(theta, kp.j(), split));
    EXPECT_EQ(gamma.is_symmetric(), is_pluriharmonic(kp));
    EXPECT_TRUE(theta.is_symmetric());
    if (is_flat(gamma)) EXPECT_TRUE(is_flat(theta));
    for (const BilinearMap& phi : {gamma, beta, theta}) EXPECT_TRUE(even_facts(phi, kp.j(), split).all());
    EXPECT_TRUE(nullity_intersection_identity(kp));
  }
}
