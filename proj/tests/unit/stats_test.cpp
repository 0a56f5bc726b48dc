#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "error.hpp"
#include "stats.hpp"

namespace votkit {
namespace {

TEST(AverageRanks, TiesShareMeanPosition) {
  const std::vector<double> v{3, 1, 3, 2, 3};
  const auto r = average_ranks(v);
  EXPECT_EQ(r, (std::vector<double>{4, 1, 4, 2, 4}));
}

TEST(SignedRank, AllZeroIsNotSignificant) {
  const std::vector<double> d(7, 0.0);
  const auto r = signed_rank(d);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.significant);
}

TEST(SignedRank, FiveAllPositiveExact) {
  const std::vector<double> d{0.1, 0.4, 0.2, 0.5, 0.3};
  const auto r = signed_rank(d);
  EXPECT_EQ(r.method, TestMethod::Exact);
  EXPECT_DOUBLE_EQ(r.statistic, 15.0);
  EXPECT_NEAR(r.p_value, 0.0625, 1e-12);
  EXPECT_FALSE(r.significant);
}

TEST(SignedRank, MatchesReferenceExactValue) {
  // Reference: scipy.stats.wilcoxon(method="exact") reports p = 0.109375.
  const std::vector<double> d{1.5, -0.3, 2.2, 0.7, -1.1, 0.4, 3.0, 0.9};
  const auto r = signed_rank(d);
  EXPECT_DOUBLE_EQ(r.statistic, 30.0);
  EXPECT_NEAR(r.p_value, 0.109375, 1e-12);
}

TEST(SignedRank, MatchesReferenceNormalApproximation) {
  // Reference: scipy.stats.wilcoxon(method="approx", correction=True).
  std::vector<double> d;
  for (int i = 1; i <= 25; ++i) d.push_back(0.1 * i * (i % 2 ? -1 : 1));
  d.push_back(0.05);
  const auto r = signed_rank(d);
  EXPECT_EQ(r.method, TestMethod::NormalApprox);
  EXPECT_NEAR(r.p_value, 0.8788810287683795, 1e-9);
}

TEST(SignedRank, TieCorrectedNormalApproximation) {
  const std::vector<double> t{1, 2, 2, 3, 3, 3, 4, 4, 5, 6, 7, 8, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  std::vector<double> d;
  for (std::size_t i = 0; i < t.size(); ++i) d.push_back(i % 2 ? -t[i] : t[i]);
  EXPECT_NEAR(signed_rank(d).p_value, 0.8823152167737893, 1e-9);
}

TEST(SignedRank, SignFlipLeavesPUnchanged) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.3, 1.0);
  for (int size : {6, 15, 30}) {
    std::vector<double> d(size), neg(size);
    for (int i = 0; i < size; ++i) d[i] = n(rng), neg[i] = -d[i];
    EXPECT_NEAR(signed_rank(d).p_value, signed_rank(neg).p_value, 1e-12);
  }
}

TEST(SignedRank, ZerosDroppedOrRankedWithPratt) {
  const std::vector<double> d{0, 0, 1, 2, 3, 4, 5};
  const auto w = signed_rank(d);
  EXPECT_EQ(w.n, 5u);
  EXPECT_NEAR(w.p_value, 0.0625, 1e-12);
  SignedRankOptions pratt;
  pratt.zeros = ZeroHandling::Pratt;
  const auto p = signed_rank(d, pratt);
  EXPECT_EQ(p.n, 5u);  // signed ranks only; the zeros just shift them
  EXPECT_DOUBLE_EQ(p.statistic, 3 + 4 + 5 + 6 + 7);
  EXPECT_NEAR(p.p_value, 0.0625, 1e-12);
}

TEST(SignedRank, ExactAndNormalAgreeAtCutoff) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> shift(-0.8, 0.8);
  SignedRankOptions normal;
  normal.exact_cutoff = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> d(20);
    const double s = shift(rng);
    for (auto& x : d) x = n(rng) + s;
    const auto exact = signed_rank(d), approx = signed_rank(d, normal);
    ASSERT_EQ(exact.method, TestMethod::Exact);
    ASSERT_EQ(approx.method, TestMethod::NormalApprox);
    worst = std::max(worst, std::abs(exact.p_value - approx.p_value));
  }
  EXPECT_LT(worst, 0.02);
}

TEST(RankSum, IdenticalSamplesGiveOne) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_NEAR(rank_sum(a, a).p_value, 1.0, 1e-12);
}

TEST(RankSum, SeparatedTriplesExact) {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const auto r = rank_sum(a, b);
  EXPECT_EQ(r.method, TestMethod::Exact);
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 0.1, 1e-12);
  EXPECT_NEAR(rank_sum(b, a).p_value, 0.1, 1e-12);
}

TEST(RankSum, MatchesReferenceExactValue) {
  // Reference: scipy.stats.mannwhitneyu(method="exact") gives U = 3, p = 0.030303...
  const std::vector<double> a{3.1, 2.2, 5.0, 4.4, 1.0}, b{6.0, 5.5, 7.1, 4.9, 8.2, 3.3};
  const auto r = rank_sum(a, b);
  EXPECT_DOUBLE_EQ(r.statistic, 3.0);
  EXPECT_NEAR(r.p_value, 0.030303030303030304, 1e-12);
  EXPECT_TRUE(r.significant);
}

TEST(RankSum, MatchesReferenceTieCorrectedApproximation) {
  // Reference: scipy.stats.mannwhitneyu(method="asymptotic", use_continuity=True).
  std::vector<double> a;
  for (int i = 0; i < 10; ++i) a.push_back(0.5 * i);
  a.insert(a.end(), {1, 1, 2});
  const std::vector<double> b{2, 3, 3, 4.5, 6, 7, 7.5, 8, 9, 9.5};
  const auto r = rank_sum(a, b);
  EXPECT_EQ(r.method, TestMethod::NormalApprox);
  EXPECT_DOUBLE_EQ(r.statistic, 13.5);
  EXPECT_NEAR(r.p_value, 0.0015082450748815466, 1e-9);
}

TEST(RankSum, SwapAndMonotoneTransformInvariance) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto [na, nb] : {std::pair{4, 5}, std::pair{15, 12}}) {
    std::vector<double> a(na), b(nb), ea(na), eb(nb);
    for (auto& x : a) x = n(rng);
    for (auto& x : b) x = n(rng) + 0.5;
    for (int i = 0; i < na; ++i) ea[i] = std::exp(a[i]);
    for (int i = 0; i < nb; ++i) eb[i] = std::exp(b[i]);
    const double p = rank_sum(a, b).p_value;
    EXPECT_NEAR(p, rank_sum(b, a).p_value, 1e-12);
    EXPECT_NEAR(p, rank_sum(ea, eb).p_value, 1e-12);
  }
}

TEST(RankSum, ConstantPooledSampleGivesOne) {
  const std::vector<double> a(10, 2.0), b(9, 2.0);
  EXPECT_EQ(rank_sum(a, b).p_value, 1.0);
}

TEST(RankSum, ExactAndNormalAgreeAtCutoff) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  RankSumOptions normal;
  normal.exact_cutoff = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> a(6), b(6);
    const double s = shift(rng);
    for (auto& x : a) x = n(rng);
    for (auto& x : b) x = n(rng) + s;
    const auto exact = rank_sum(a, b), approx = rank_sum(a, b, normal);
    ASSERT_EQ(exact.method, TestMethod::Exact);
    worst = std::max(worst, std::abs(exact.p_value - approx.p_value));
  }
  EXPECT_LT(worst, 0.02);
}

TEST(RankSum, EmptySampleIsRejected) {
  const std::vector<double> a{1.0}, none;
  EXPECT_THROW(rank_sum(a, none), Error);
}

TEST(PracticalDifference, ZeroDifferenceIsNotDifferent) {
  const std::vector<double> phi{0.5, 0.6, 0.7}, g(3, 0.1);
  EXPECT_FALSE(practical_difference(phi, phi, g));
}

TEST(PracticalDifference, LargeConstantDifference) {
  const std::vector<double> a(4, 0.7), b(4, 0.5), g(4, 0.1);
  EXPECT_TRUE(practical_difference(a, b, g));
  EXPECT_TRUE(practical_difference(b, a, g));
}

TEST(PracticalDifference, BoundaryMeanOfOneIsNotDifferent) {
  const std::vector<double> a{0.3, 0.0}, b{0.0, 0.1}, g{0.1, 0.1};
  EXPECT_FALSE(practical_difference(a, b, g));
  EXPECT_FALSE(practical_difference(b, a, g));
}

TEST(PracticalDifference, ZeroThresholdFramesAreSkipped) {
  const std::vector<double> a{0.9, 0.5}, b{0.1, 0.5}, g{0.0, 0.1};
  EXPECT_FALSE(practical_difference(a, b, g));
  const std::vector<double> none{0.0, 0.0};
  EXPECT_TRUE(practical_difference(a, b, none));
  EXPECT_FALSE(practical_difference(a, a, none));
}

TEST(PracticalDifference, LengthMismatchIsShapeError) {
  const std::vector<double> a{0.1, 0.2}, b{0.1}, g{0.1, 0.1};
  try {
    practical_difference(a, b, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
}

TEST(Equivalence, IdenticalStreamsAreEquivalent) {
  const std::vector<double> phi{0.5, 0.6, 0.7, 0.8}, g(4, 0.05);
  EXPECT_TRUE(equivalent_accuracy(phi, phi, g));
  const std::vector<double> f{1, 2, 3};
  EXPECT_TRUE(equivalent_robustness(f, f));
}

TEST(Equivalence, SignificantButSubThresholdIsEquivalent) {
  std::vector<double> a(30), b(30), g(30, 0.5);
  for (int i = 0; i < 30; ++i) a[i] = 0.5 + 0.001 * i, b[i] = a[i] - 0.02;
  EXPECT_TRUE(signed_rank(std::vector<double>(30, 0.02)).significant);
  EXPECT_TRUE(equivalent_accuracy(a, b, g));
  EquivalenceOptions no_practical;
  no_practical.practical = false;
  EXPECT_FALSE(equivalent_accuracy(a, b, g, no_practical));
}

TEST(Equivalence, LargeConsistentDifferenceIsNotEquivalent) {
  std::vector<double> a(30), b(30), g(30, 0.05);
  for (int i = 0; i < 30; ++i) a[i] = 0.6 + 0.005 * i, b[i] = a[i] - 0.3;
  EXPECT_FALSE(equivalent_accuracy(a, b, g));
}

TEST(Equivalence, NanFramesAreDroppedFromPairing) {
  std::vector<double> a(30), b(30), g(30, 0.05);
  for (int i = 0; i < 30; ++i) a[i] = 0.9, b[i] = 0.9;
  for (int i = 0; i < 10; ++i) b[i] = NAN, a[i] = 0.0;
  EXPECT_TRUE(equivalent_accuracy(a, b, g));
}

TEST(Equivalence, SeparatedFailureCountsAreNotEquivalent) {
  const std::vector<double> a{0, 0, 1, 0, 0, 1, 0, 0}, b{5, 6, 7, 5, 6, 8, 7, 6};
  EXPECT_FALSE(equivalent_robustness(a, b));
  EXPECT_TRUE(equivalent_robustness(a, a));
}

}  // namespace
}  // namespace votkit
