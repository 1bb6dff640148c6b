#include <gtest/gtest.h>

#include "warpfield/errors.hpp"
#include "warpfield/wick.hpp"

using namespace warpfield;
using namespace warpfield::wick;

TEST(Pairings, OnePairBothStatistics) {
  for (auto s : {Statistics::bose, Statistics::fermi}) {
    const auto& p = enumerate_pairings(1, s);
    ASSERT_EQ(p.pairings.size(), 1u);
    EXPECT_EQ(p.pairings[0][0], std::make_pair(0, 1));
    EXPECT_EQ(p.signs[0], 1);
  }
}

TEST(Pairings, TwoPairsInLexicographicOrder) {
  const auto& p = enumerate_pairings(2, Statistics::bose);
  ASSERT_EQ(p.pairings.size(), 3u);
  using P = std::vector<std::pair<int, int>>;
  // words 0123 < 0132 < 0213
  EXPECT_EQ(p.pairings[0], (P{{0, 2}, {1, 3}}));
  EXPECT_EQ(p.pairings[1], (P{{0, 3}, {1, 2}}));
  EXPECT_EQ(p.pairings[2], (P{{0, 1}, {2, 3}}));
}

TEST(Pairings, FermiSignsOfFourPoint) {
  const auto& p = enumerate_pairings(2, Statistics::fermi);
  // w12 w34 - w13 w24 + w14 w23
  EXPECT_EQ(p.signs, (std::vector<int>{-1, 1, 1}));
}

TEST(Pairings, CountsAreDoubleFactorials) {
  for (int n = 0; n <= 5; ++n)
    EXPECT_EQ(static_cast<long long>(enumerate_pairings(n, Statistics::fermi).pairings.size()), double_factorial_odd(n));
  EXPECT_EQ(double_factorial_odd(3), 15);
}

TEST(Pairings, TooManyPairsIsResourceError) {
  EXPECT_THROW(enumerate_pairings(7, Statistics::bose), ResourceError);
  EXPECT_THROW(enumerate_pairings(3, Statistics::bose, 2), ResourceError);
}

TEST(Pairings, PermutationSign) {
  EXPECT_EQ(permutation_sign({0, 1, 2, 3}), 1);
  EXPECT_EQ(permutation_sign({0, 2, 1, 3}), -1);
  EXPECT_EQ(permutation_sign({1, 2, 0}), 1);
}

TEST(Assemble, ZeroTwoPointGivesZero) {
  EXPECT_EQ(assemble_npoint(enumerate_pairings(3, Statistics::bose), [](int, int) { return 0.0; }),
            std::complex<double>(0.0));
}

TEST(Assemble, BoseUnitTwoPointCountsPairings) {
  EXPECT_EQ(assemble_npoint(enumerate_pairings(2, Statistics::bose), [](int, int) { return 1.0; }),
            std::complex<double>(3.0));
}

TEST(Assemble, FermiFourPointPattern) {
  const double w[4][4] = {{0, 2, 3, 5}, {0, 0, 7, 11}, {0, 0, 0, 13}, {0, 0, 0, 0}};
  const auto v = assemble_npoint(enumerate_pairings(2, Statistics::fermi), [&](int i, int j) { return w[i][j]; });
  EXPECT_EQ(v, std::complex<double>(2 * 13 - 3 * 11 + 5 * 7));
}
