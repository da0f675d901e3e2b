#include <gtest/gtest.h>

#include <random>

#include "z2lat/discriminant.hpp"
#include "z2lat/exterior.hpp"

using namespace z2lat;

namespace {

IntMatrix random_even(std::mt19937_64& rng, std::size_t n) {
  for (;;) {
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        long v = i == j ? 2 * (static_cast<long>(rng() % 5) - 2) : static_cast<long>(rng() % 5) - 2;
        a(i, j) = v;
        a(j, i) = v;
      }
    Integer d = det(a);
    if (d != 0 && abs(d) <= 200) return a;
  }
}

}  // namespace

TEST(Group, ExteriorCokernels) {
  auto g3 = discriminant_group(exterior_matrix_closed_form(3).gram());
  EXPECT_EQ(g3.invariants(), (std::vector<Integer>{4}));
  auto g2 = discriminant_group(exterior_matrix_closed_form(2).gram());
  EXPECT_EQ(g2.invariants(), (std::vector<Integer>{2, 2}));
  auto e = discriminant_group(IntMatrix::identity(3));
  EXPECT_EQ(e.order(), 1);
  EXPECT_THROW(discriminant_group(IntMatrix{{1, 1}, {1, 1}}), Error);
}

TEST(Group, ProjectLiftRoundTrip) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    IntMatrix a = random_even(rng, 1 + rng() % 4);
    auto g = discriminant_group(a);
    EXPECT_EQ(g.order(), abs(det(a)));
    g.for_each([&](const FiniteAbelianGroup::Element& x) { EXPECT_EQ(g.project(g.lift(x)), x); });
    // columns of A map to zero
    for (std::size_t j = 0; j < a.cols(); ++j) {
      auto z = g.project(a.column(j));
      for (const auto& c : z) EXPECT_EQ(c, 0);
    }
  }
}

TEST(Refinement, Examples) {
  EXPECT_EQ(quadratic_refinement(IntMatrix{{2, 1}, {1, 2}}).Q, (IntMatrix{{1, 1}, {0, 1}}));
  EXPECT_EQ(quadratic_refinement(IntMatrix{{4, 2}, {2, 2}}).Q, (IntMatrix{{2, 2}, {0, 1}}));
  EXPECT_THROW(quadratic_refinement(IntMatrix{{1, 0}, {0, 2}}), Error);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    IntMatrix a = random_even(rng, 1 + rng() % 5);
    IntMatrix q = quadratic_refinement(a).Q;
    EXPECT_EQ(q + q.transpose(), a);
  }
}

TEST(LinkingForm, RankOneValues) {
  auto q4 = boundary_linking_form(IntMatrix{{4}}, {IntMatrix{{2}}});
  EXPECT_EQ(q4.q({Integer(1)}), Rational(1, 8));
  auto q8 = boundary_linking_form(IntMatrix{{8}}, {IntMatrix{{4}}});
  EXPECT_EQ(q8.q({Integer(1)}), Rational(1, 16));
  auto trivial = boundary_linking_form(IntMatrix{{2, 1}, {1, 2}} , quadratic_refinement(IntMatrix{{2, 1}, {1, 2}}));
  EXPECT_EQ(trivial.group().order(), 3);
  auto unimodular = boundary_linking_form(IntMatrix{{0, 1}, {1, 0}}, quadratic_refinement(IntMatrix{{0, 1}, {1, 0}}));
  EXPECT_EQ(unimodular.group().order(), 1);
  EXPECT_THROW(boundary_linking_form(IntMatrix{{4}}, {IntMatrix{{1}}}), Error);
}

TEST(LinkingForm, PairingMatchesInverse) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 25; ++t) {
    IntMatrix a = random_even(rng, 1 + rng() % 6);
    auto q = boundary_linking_form(a, quadratic_refinement(a));
    const auto& g = q.group();
    RatMatrix inv = rational_inverse(a);
    std::vector<FiniteAbelianGroup::Element> elems;
    g.for_each([&](const FiniteAbelianGroup::Element& x) { elems.push_back(x); });
    for (std::size_t s = 0; s < std::min<std::size_t>(elems.size(), 12); ++s)
      for (std::size_t r = 0; r < std::min<std::size_t>(elems.size(), 12); ++r) {
        const auto &x = elems[s], &y = elems[r];
        EXPECT_EQ(q.b(x, y), frac(q.q(g.add(x, y)) - q.q(x) - q.q(y)));
        IntVector zx = g.lift(x), zy = g.lift(y);
        Rational direct = 0;
        for (std::size_t i = 0; i < zx.size(); ++i)
          for (std::size_t j = 0; j < zy.size(); ++j) direct += zx[i] * inv(i, j) * zy[j];
        EXPECT_EQ(q.b(x, y), frac(direct));
        FiniteAbelianGroup::Element neg(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
        EXPECT_EQ(q.q(g.reduce(neg)), q.q(x));
      }
  }
}

TEST(Search, SelfAndMismatch) {
  IntMatrix a = exterior_matrix_closed_form(3).gram();
  auto q = boundary_linking_form(a, quadratic_refinement(a));
  auto id = linking_isometry_search(q, q);
  ASSERT_TRUE(id.has_value());
  EXPECT_EQ(*id, IntMatrix::identity(1));
  // (4) with refinement values 1/8 vs (12)... same group Z4, different values
  auto other = boundary_linking_form(IntMatrix{{-4}}, {IntMatrix{{-2}}});
  EXPECT_FALSE(linking_isometry_search(boundary_linking_form(IntMatrix{{4}}, {IntMatrix{{2}}}), other).has_value());
}

TEST(Search, DoubledExteriorForms) {
  IntMatrix au = exterior_matrix_closed_form(9).gram();
  IntMatrix ab = exterior_nd_form(e8_plus_ones(1)).induced.gram();
  auto q2u = scaled_linking_form(au, quadratic_refinement(au), 2);
  auto q2b = scaled_linking_form(ab, quadratic_refinement(ab), 2);
  EXPECT_EQ(q2u.group().order(), Integer(1) << 11);
  auto iso = linking_isometry_search(q2u, q2b);
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_linking_isometry(q2u, q2b, *iso));
}

TEST(Lift, RankOneTimesThree) {
  IntMatrix a{{4}};
  auto lift = lift_isometry_mod2(IntMatrix{{3}}, a, a);
  EXPECT_TRUE(lift.commutes);
  EXPECT_TRUE(lift.isometry);
  EXPECT_TRUE(lift.half_relation);
  EXPECT_EQ(mod_floor(lift.matrix(0, 0), 4), 3);
  // the entrywise lift x3 commutes with reduction on all of Z/8
  for (long x = 0; x < 8; ++x) EXPECT_EQ(mod_floor(Integer(3 * x), 4), mod_floor(Integer(3 * (x % 4)), 4));
}

TEST(Lift, RankTwoGL2) {
  IntMatrix a = exterior_matrix_closed_form(2).gram();
  auto q = boundary_linking_form(a, quadratic_refinement(a));
  // every automorphism of (Z/2)^2 preserving q lifts
  for (int bits = 0; bits < 16; ++bits) {
    IntMatrix m{{bits & 1, (bits >> 1) & 1}, {(bits >> 2) & 1, (bits >> 3) & 1}};
    if (!is_linking_isometry(q, q, m)) continue;
    auto lift = lift_isometry_mod2(m, a, a);
    EXPECT_TRUE(lift.commutes);
    EXPECT_TRUE(lift.isometry);
  }
}

TEST(Lift, RejectsMismatchedCokernels) {
  IntMatrix a2 = exterior_matrix_closed_form(2).gram(), a3 = exterior_matrix_closed_form(3).gram();
  EXPECT_THROW(lift_isometry_mod2(IntMatrix::identity(1), a3, a2), Error);
}

TEST(Lift, DoubledFormsOfExteriorForms) {
  for (std::size_t k = 1; k <= 3; ++k) {
    const std::size_t h = 8 + k;
    IntMatrix au = exterior_matrix_closed_form(h).gram();
    IntMatrix ab = exterior_nd_form(e8_plus_ones(k)).induced.gram();
    auto qu = boundary_linking_form(au, quadratic_refinement(au));
    auto qb = boundary_linking_form(ab, quadratic_refinement(ab));
    auto psi = linking_isometry_search(qu, qb);
    ASSERT_TRUE(psi.has_value());
    auto lift = lift_isometry_mod2(*psi, au, ab);
    EXPECT_TRUE(lift.commutes) << k;
    EXPECT_TRUE(lift.isometry) << k;
    EXPECT_TRUE(lift.half_relation) << k;
  }
}
