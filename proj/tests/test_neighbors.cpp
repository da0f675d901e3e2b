#include <gtest/gtest.h>

#include <random>

#include "z2lat/neighbors.hpp"

using namespace z2lat;

TEST(MdSublattice, IndexAndMembership) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng() % 4;
    SymBilinearForm l = diagonal_ones(n);
    IntVector x(n);
    for (auto& c : x) c = static_cast<long>(rng() % 7) - 3;
    const Integer d = 2 + rng() % 4;
    SublatticeEmbedding m = m_d_sublattice(l, x, d);
    for (std::size_t j = 0; j < n; ++j) {
      IntVector col = m.basis.column(j);
      EXPECT_EQ(mod_floor(dot(col, x), d), 0);
    }
    // index is the order of x.y mod d as y ranges: d / gcd(d, content(x))
    const Integer expected = d / gcd(d, vector_gcd(x));
    EXPECT_EQ(m.index(), expected);
    EXPECT_EQ(is_d_primitive(l, x, d), expected == d);
  }
}

TEST(MdSublattice, ExteriorIsTheCharacteristicCase) {
  for (std::size_t h = 1; h <= 6; ++h) {
    SymBilinearForm l = diagonal_ones(h);
    SublatticeEmbedding a = m_d_sublattice(l, IntVector(h, 1), 2);
    EXPECT_EQ(a.basis, exterior_nd_form(l).basis);
  }
}

TEST(Overlattices, OnesEightGivesThree) {
  auto o = even_part_overlattices(diagonal_ones(8));
  ASSERT_EQ(o.size(), 3u);
  int even = 0, ambient = 0;
  for (const auto& x : o) {
    if (x.parity == Parity::Even) {
      ++even;
      EXPECT_TRUE(is_isometric_definite(x.form, e8()).has_value());
    }
    if (x.equals_ambient) {
      ++ambient;
      EXPECT_TRUE(is_isometric_definite(x.form, diagonal_ones(8)).has_value());
    }
  }
  EXPECT_EQ(even, 2);
  EXPECT_EQ(ambient, 1);
}

TEST(Overlattices, CountsByRankModFour) {
  // glue group Z4 for odd h, Z2^2 for even h; only h = 0 mod 4 has extra integral glue
  for (std::size_t h = 5; h <= 11; ++h) {
    auto o = even_part_overlattices(diagonal_ones(h));
    EXPECT_EQ(o.size(), h % 4 == 0 ? 3u : 1u) << h;
    for (const auto& x : o) EXPECT_TRUE(x.form.is_unimodular());
  }
}

TEST(Overlattices, RejectsLargeGlue) {
  SublatticeEmbedding m = make_embedding(diagonal_ones(2), IntMatrix{{1000, 0}, {0, 1}});
  EXPECT_THROW(unimodular_overlattices(dual_overlattice_data(m)), Error);
}

TEST(Gamma, SmallRanks) {
  EXPECT_THROW(gamma_lattice(6), Error);
  EXPECT_THROW(gamma_lattice(0), Error);
  SymBilinearForm g4 = gamma_lattice(4);
  EXPECT_TRUE(g4.is_unimodular());
  EXPECT_TRUE(is_isometric_definite(g4, diagonal_ones(4)).has_value());
  SymBilinearForm g8 = gamma_lattice(8);
  EXPECT_TRUE(g8.is_even());
  EXPECT_TRUE(is_isometric_definite(g8, e8()).has_value());
}

TEST(Gamma, TwelveIsOddWithoutUnitVectors) {
  SymBilinearForm g = gamma_lattice(12);
  EXPECT_TRUE(g.is_unimodular());
  EXPECT_TRUE(g.is_odd());
  EXPECT_TRUE(g.is_positive_definite());
  EXPECT_EQ(count_vectors_of_norm(g, 1), 0);
  // D12 roots only
  EXPECT_EQ(count_vectors_of_norm(g, 2), 2 * 12 * 11);
  EXPECT_FALSE(is_isometric_definite(g, diagonal_ones(12)).has_value());
}

TEST(Classify, SharingExteriorTable) {
  const std::vector<std::vector<std::string>> expected = {
      {"(1)^8"}, {"(1)^9"}, {"(1)^10"}, {"(1)^11"}, {"(1)^12", "Gamma12"}, {"(1)^13"},
  };
  for (std::size_t h = 8; h <= 13; ++h) {
    auto classes = classify_sharing_exterior(diagonal_ones(h));
    std::vector<std::string> labels;
    for (const auto& c : classes) labels.push_back(c.label);
    ASSERT_FALSE(classes.empty());
    EXPECT_TRUE(classes.front().is_input);
    EXPECT_EQ(labels.front(), expected[h - 8].front()) << h;
    std::vector<std::string> got(labels.begin(), labels.end());
    std::vector<std::string> want = expected[h - 8];
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want) << h;
  }
}

TEST(Classify, GammaTwelveSharesWithOnes) {
  auto classes = classify_sharing_exterior(gamma_lattice(12));
  ASSERT_EQ(classes.size(), 2u);
  EXPECT_EQ(classes[0].label, "Gamma12");
  EXPECT_EQ(classes[1].label, "(1)^12");
}

TEST(Overlattices, TwelveHasTwoOddNeighbours) {
  auto o = even_part_overlattices(diagonal_ones(12));
  ASSERT_EQ(o.size(), 3u);
  for (const auto& x : o) {
    EXPECT_EQ(x.parity, Parity::Odd);
    if (!x.equals_ambient) {
      EXPECT_TRUE(is_isometric_definite(x.form, gamma_lattice(12)).has_value());
    }
  }
}

TEST(Overlattices, NeighboursExcludeTheInput) {
  const std::pair<std::size_t, std::size_t> expected[] = {{8, 2}, {9, 0}, {10, 0}, {11, 0}, {12, 2}, {13, 0}};
  for (const auto& [h, count] : expected) {
    auto n = two_neighbors(diagonal_ones(h));
    EXPECT_EQ(n.size(), count) << h;
    for (const auto& x : n) EXPECT_FALSE(x.equals_ambient);
  }
}

TEST(Classify, RejectsBadInput) {
  EXPECT_THROW(classify_sharing_exterior(e8()), Error);
  EXPECT_THROW(classify_sharing_exterior(SymBilinearForm(IntMatrix{{3}})), Error);
  EXPECT_THROW(classify_sharing_exterior(SymBilinearForm(IntMatrix{{-1}})), Error);
}
