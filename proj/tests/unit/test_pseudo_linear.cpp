#include "flatform/complex_structure.hpp"
#include "flatform/inner_space.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace flatform;
using flatform::testing::random_matrix;
using flatform::testing::rows;

TEST(Scalar, ParsesExactDecimalsAndFractions) {
  EXPECT_EQ(parse_scalar("0.1"), Scalar(1, 10));
  EXPECT_EQ(parse_scalar("-3/4"), Scalar(-3, 4));
  EXPECT_EQ(parse_scalar("2.5e-3"), Scalar(1, 400));
  EXPECT_EQ(format_scalar(Scalar(6, 8)), "3/4");
  EXPECT_THROW(parse_scalar("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_scalar("abc"), std::invalid_argument);
}

TEST(Rank, SmallMatrices) {
  EXPECT_EQ(rank(Matrix::identity(2)), 2u);
  EXPECT_EQ(rank(Matrix(3, 4)), 0u);
  // [[1,2],[2,4]]: second row is twice the first.
  EXPECT_EQ(rank(rows({{1, 2}, {2, 4}})), 1u);
}

TEST(Perp, SplitPlane) {
  auto w = InnerSpace::split(1);
  EXPECT_EQ(perp(Subspace::whole(w)).dim(), 0u);

  const auto diag = Subspace::from_basis(w, rows({{1, 1}}));
  EXPECT_TRUE(perp(diag).same_as(diag));

  // <<(x,y),(1,0)>> = x = 0
  const auto e1 = Subspace::from_basis(w, rows({{1, 0}}));
  EXPECT_TRUE(perp(e1).same_as(Subspace::from_basis(w, rows({{0, 1}}))));
}

TEST(Radical, Examples) {
  auto w = InnerSpace::split(1);
  EXPECT_EQ(radical(Subspace::from_basis(w, rows({{1, 0}}))).dim(), 0u);
  const auto iso = Subspace::from_basis(w, rows({{1, 1}}));
  EXPECT_TRUE(radical(iso).same_as(iso));
  // span{(1,1),(1,0)} is all of W^{1,1}; its perp is 0, so the joint kernel is 0.
  EXPECT_EQ(radical(Subspace::from_basis(w, rows({{1, 1}, {1, 0}}))).dim(), 0u);
}

TEST(Decompose, IsotropicLine) {
  auto w = InnerSpace::split(1);
  const auto l = Subspace::from_basis(w, rows({{1, 1}}));
  const Decomposition d = decompose(l);
  EXPECT_TRUE(d.radical.same_as(l));
  // (1,-1) is the only other isotropic line of W^{1,1}; <<(1,1),(1,-1)>> = 2.
  EXPECT_TRUE(d.dual.same_as(Subspace::from_basis(w, rows({{1, -1}}))));
  EXPECT_EQ(d.rest.dim(), 0u);
}

TEST(Decompose, NondegenerateAndZero) {
  auto w = InnerSpace::split(2);
  const auto l = Subspace::from_basis(w, rows({{1, 0, 0, 0}, {0, 0, 1, 0}}));
  const Decomposition d = decompose(l);
  EXPECT_EQ(d.radical.dim(), 0u);
  EXPECT_EQ(d.dual.dim(), 0u);
  EXPECT_TRUE(d.rest.contains(l));

  const Decomposition z = decompose(Subspace(w));
  EXPECT_EQ(z.radical.dim(), 0u);
  EXPECT_EQ(z.dual.dim(), 0u);
  EXPECT_EQ(z.rest.dim(), 4u);
}

TEST(Intersect, Examples) {
  auto e = InnerSpace::euclidean(3);
  const auto a = Subspace::from_basis(e, rows({{1, 0, 1}, {0, 1, 0}}));
  const auto b = Subspace::from_basis(e, rows({{1, 1, 1}}));
  EXPECT_TRUE(intersect(a, b).same_as(b));
  EXPECT_TRUE(intersect(a, a).same_as(a));
  const auto c = Subspace::from_basis(e, rows({{0, 0, 1}}));
  const auto d = Subspace::from_basis(e, rows({{1, 0, 0}, {0, 1, 0}}));
  EXPECT_EQ(intersect(c, d).dim(), 0u);
  EXPECT_THROW(intersect(a, Subspace::whole(InnerSpace::euclidean(2))), std::invalid_argument);
}

TEST(SplitSpace, OperatorLaws) {
  for (std::size_t p = 1; p <= 4; ++p) {
    const SplitSpace s(p);
    EXPECT_EQ(s.space()->signature(), (Signature{p, p, 0}));
    EXPECT_TRUE(s.check_operator_laws());
  }
}

TEST(ComplexStructure, RejectsNonComplex) {
  EXPECT_THROW(ComplexStructure(rows({{1, 0}, {0, 1}})), std::invalid_argument);
  EXPECT_NO_THROW(ComplexStructure(rows({{0, -1}, {1, 0}})));
}

// Property: dim perp(s) = dim W - rank(G B^T) and decompose() postconditions.
TEST(PseudoLinearProperty, PerpDimensionAndDecomposition) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t p = 1 + rng() % 4;
    auto w = InnerSpace::split(p);
    const std::size_t k = 1 + rng() % (2 * p);
    const Subspace l = Subspace::span(w, random_matrix(rng, k, 2 * p, 2));
    const Matrix gb = w->gram() * l.basis().transpose();
    EXPECT_EQ(perp(l).dim(), 2 * p - rank(gb));

    const Decomposition d = decompose(l);
    const std::size_t r = d.radical.dim();
    EXPECT_TRUE(d.radical.same_as(intersect(l, perp(l))));
    EXPECT_TRUE(is_isotropic(d.radical));
    EXPECT_TRUE(is_isotropic(d.dual));
    EXPECT_EQ(d.dual.dim(), r);
    EXPECT_EQ(rank(sum(d.radical, d.dual).gram()), 2 * r);
    EXPECT_TRUE(sum(d.radical, d.rest).contains(l));
    EXPECT_TRUE(d.rest.same_as(perp(sum(d.radical, d.dual))));
  }
}
