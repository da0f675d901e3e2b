#include <gtest/gtest.h>

#include <random>

#include "z2lat/hermitian.hpp"

using namespace z2lat;

namespace {

GroupRingElement random_entry(std::mt19937_64& rng, Summand s, Summand t) {
  std::uniform_int_distribution<long> d(-5, 5);
  const bool plus = s == Summand::Plus || t == Summand::Plus;
  const bool minus = s == Summand::Minus || t == Summand::Minus;
  if (plus && minus) return GroupRingElement(0);
  const long k = d(rng);
  if (plus) return GroupRingElement(k, k);
  if (minus) return GroupRingElement(k, -k);
  return GroupRingElement(k, d(rng));
}

HermitianForm random_form(std::mt19937_64& rng) {
  LambdaModule m{rng() % 4, rng() % 4, rng() % 4};
  const std::size_t n = m.generators();
  LambdaMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      g(i, j) = random_entry(rng, m.type(i), m.type(j));
      g(j, i) = g(i, j);
    }
  return HermitianForm(m, g);
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return u;
  for (int s = 0; s < 8; ++s) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i != j) u.add_col(i, j, Integer(static_cast<long>(rng() % 3) - 1));
  }
  return u;
}

}  // namespace

TEST(GroupRing, Arithmetic) {
  GroupRingElement t = GroupRingElement::t();
  EXPECT_EQ(t * t, GroupRingElement(1));
  GroupRingElement x(2, 3), y(-1, 4);
  EXPECT_EQ(x * y, GroupRingElement(2 * -1 + 3 * 4, 2 * 4 + 3 * -1));
  EXPECT_EQ((x * y).plus(), x.plus() * y.plus());
  EXPECT_EQ((x * y).minus(), x.minus() * y.minus());
  EXPECT_EQ(x.conj(), x);
}

TEST(Parts, HyperbolicLambda) {
  FormParts p = plus_minus_parts(hyperbolic_lambda());
  EXPECT_EQ(p.plus, hyperbolic());
  EXPECT_EQ(p.minus, hyperbolic());
  EXPECT_EQ(two_part(p.plus, hyperbolic_lambda().module()), hyperbolic().gram());
  EXPECT_EQ(pullback(hyperbolic(), hyperbolic(), {0, 0, 2}), hyperbolic_lambda());
}

TEST(Parts, MinusGenerator) {
  for (long k = -3; k <= 3; ++k) {
    HermitianForm l({0, 1, 0}, LambdaMatrix{{GroupRingElement(k, -k)}});
    FormParts p = plus_minus_parts(l);
    EXPECT_EQ(p.plus.dim(), 0u);
    EXPECT_EQ(p.minus.gram(), (IntMatrix{{2 * k}}));
  }
  HermitianForm l = pullback(SymBilinearForm(IntMatrix(0, 0)), SymBilinearForm(IntMatrix{{2}}), {0, 1, 0});
  EXPECT_EQ(l.gram()(0, 0), GroupRingElement(1, -1));
}

TEST(Parts, TwoPartEdgeCases) {
  EXPECT_EQ(two_part(diagonal_ones(3), {3, 0, 0}).rows(), 0u);
  SymBilinearForm doubled = scaled(SymBilinearForm(IntMatrix{{3, 1}, {1, 5}}), 2);
  EXPECT_TRUE(two_part(doubled, {0, 0, 2}).is_zero());
}

TEST(Pullback, RejectsIncompatibleParts) {
  EXPECT_THROW(pullback(diagonal_ones(1), SymBilinearForm(IntMatrix{{2}}), {0, 0, 1}), Error);
  EXPECT_THROW(pullback(diagonal_ones(1), SymBilinearForm(IntMatrix(0, 0)), {1, 0, 0}), Error);
  EXPECT_THROW(HermitianForm({1, 0, 0}, LambdaMatrix{{GroupRingElement(1, 0)}}), Error);
}

TEST(Pullback, RandomRoundTrips) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    HermitianForm l = random_form(rng);
    FormParts p = plus_minus_parts(l);
    EXPECT_EQ(pullback(p.plus, p.minus, l.module()), l);
    HermitianForm again = pullback(p.plus, p.minus, l.module());
    FormParts q = plus_minus_parts(again);
    EXPECT_EQ(q.plus, p.plus);
    EXPECT_EQ(q.minus, p.minus);
  }
}

TEST(Pullback, BetaChangesCoordinatesOnly) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    HermitianForm l = random_form(rng);
    const LambdaModule& m = l.module();
    FormParts p = plus_minus_parts(l);
    IntMatrix beta = random_unimodular(rng, m.c);
    // plus part expressed through beta: (I + beta)^T plus_can (I + beta)
    SymBilinearForm moved = pullback_by(p.plus, block_diagonal(IntMatrix::identity(m.a), beta));
    EXPECT_EQ(pullback(moved, p.minus, m, beta), l);
  }
}

TEST(Pullback, DirectSumsSplit) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    HermitianForm x = random_form(rng), y = random_form(rng);
    HermitianForm s = direct_sum(x, y);
    FormParts ps = plus_minus_parts(s), px = plus_minus_parts(x), py = plus_minus_parts(y);
    IntMatrix pp = part_sum_permutation(x.module(), y.module(), false);
    IntMatrix pm = part_sum_permutation(x.module(), y.module(), true);
    EXPECT_EQ(ps.plus, pullback_by(direct_sum(px.plus, py.plus), pp));
    EXPECT_EQ(ps.minus, pullback_by(direct_sum(px.minus, py.minus), pm));
    EXPECT_EQ(pullback(ps.plus, ps.minus, s.module()), s);
  }
}

TEST(Pullback, StabilizationCommutes) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    HermitianForm l = random_form(rng);
    FormParts p = plus_minus_parts(l);
    const LambdaModule& m = l.module();
    HermitianForm lifted = pullback(stabilize(p.plus, 1), stabilize(p.minus, 1), {m.a, m.b, m.c + 2});
    EXPECT_EQ(lifted, stabilize(l, 1));
  }
}

TEST(Glue, IdentityAndSwap) {
  HermitianForm h = hyperbolic_lambda();
  auto id = glue_isometry(h, h, IntMatrix::identity(2), IntMatrix::identity(2));
  LambdaMatrix expected{{GroupRingElement(1), GroupRingElement(0)}, {GroupRingElement(0), GroupRingElement(1)}};
  EXPECT_EQ(id.matrix, expected);
  IntMatrix swap{{0, 1}, {1, 0}};
  auto sw = glue_isometry(h, h, swap, swap);
  EXPECT_EQ(sw.matrix(0, 1), GroupRingElement(1));
  EXPECT_EQ(sw.matrix(0, 0), GroupRingElement(0));
  EXPECT_TRUE(verify_hermitian_isometry(h, h, sw.matrix));
}

TEST(Glue, SignChangeIsMultiplicationByT) {
  HermitianForm l({0, 0, 1}, LambdaMatrix{{GroupRingElement(3, 1)}});
  auto g = glue_isometry(l, l, IntMatrix{{1}}, IntMatrix{{-1}});
  EXPECT_EQ(g.matrix(0, 0), GroupRingElement::t());
  EXPECT_TRUE(verify_hermitian_isometry(l, l, g.matrix));
}

TEST(Glue, RejectsMod2Disagreement) {
  HermitianForm h = hyperbolic_lambda();
  IntMatrix swap{{0, 1}, {1, 0}};
  EXPECT_THROW(glue_isometry(h, h, IntMatrix::identity(2), swap), Error);
}

TEST(Glue, RandomCompatiblePairs) {
  // swap e and f in an added hyperbolic plane, signs chosen independently
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    HermitianForm l = random_form(rng);
    HermitianForm s = stabilize(l, 1);
    FormParts ps = plus_minus_parts(s);
    const std::size_t np = ps.plus.dim(), nm = ps.minus.dim();
    IntMatrix ap = IntMatrix::identity(np), am = IntMatrix::identity(nm);
    ap.swap_cols(np - 2, np - 1);
    am.swap_cols(nm - 2, nm - 1);
    if (rng() % 2) {
      ap.negate_col(np - 2);
      ap.negate_col(np - 1);
    }
    if (rng() % 2) {
      am.negate_col(nm - 2);
      am.negate_col(nm - 1);
    }
    auto g = glue_isometry(s, s, ap, am);
    EXPECT_TRUE(verify_hermitian_isometry(s, s, g.matrix));
  }
}

TEST(Surface, ExteriorPullbackSquare) {
  PullbackSquare sq = surface_exterior_form(diagonal_ones(1));
  EXPECT_EQ(sq.lambda.gram()(0, 0), GroupRingElement(1, -1));
  EXPECT_EQ(sq.minus.gram(), (IntMatrix{{2}}));
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const std::size_t h = 1 + rng() % 6;
    IntMatrix q(h, h);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = i; j < h; ++j) {
        long v = static_cast<long>(rng() % 7) - 3;
        q(i, j) = v;
        q(j, i) = v;
      }
    SymBilinearForm qf(q);
    if (!qf.is_nondegenerate()) continue;
    PullbackSquare s = surface_exterior_form(qf);
    EXPECT_EQ(s.minus, scaled(qf, 2));
    EXPECT_TRUE(s.plus.gram().is_zero());
    EXPECT_EQ(s.plus.dim(), h - 1);
    SymBilinearForm z = underlying_form(s.lambda);
    EXPECT_EQ(z.dim() - z.rank(), h - 1);
    EXPECT_EQ(pullback(s.plus, s.minus, s.lambda.module(), s.beta), s.lambda);
  }
}
