#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace votkit {

enum class TestMethod { Exact, NormalApprox };

/// Zero differences: dropped before ranking (Wilcoxon) or ranked but not summed (Pratt).
enum class ZeroHandling { Wilcoxon, Pratt };

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;
  TestMethod method = TestMethod::Exact;
  std::size_t n = 0;
};

struct SignedRankOptions {
  double alpha = 0.05;
  std::size_t exact_cutoff = 20;
  ZeroHandling zeros = ZeroHandling::Wilcoxon;
};

struct RankSumOptions {
  double alpha = 0.05;
  std::size_t exact_cutoff = 12;  // on |a| + |b|
};

/// Ascending ranks starting at 1, ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Two-sided Wilcoxon signed-rank test of zero median; statistic is W+ (sum of positive ranks).
TestResult signed_rank(std::span<const double> differences, const SignedRankOptions& options = {});

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test; statistic is U of the first sample.
TestResult rank_sum(std::span<const double> a, std::span<const double> b, const RankSumOptions& options = {});

/// True when (1/T)|sum_t (phi_i - phi_j)/gamma_t| > 1. Frames with gamma_t = 0 are left out of
/// both sum and T; when no frame carries a threshold, any nonzero total difference counts.
bool practical_difference(std::span<const double> phi_i, std::span<const double> phi_j,
                          std::span<const double> gammas);

struct EquivalenceOptions {
  SignedRankOptions signed_rank;
  RankSumOptions rank_sum;
  bool practical = true;
};

/// Accuracy equivalence on frame-aligned streams; frames that are NaN in either stream are dropped.
bool equivalent_accuracy(std::span<const double> phi_i, std::span<const double> phi_j,
                         std::span<const double> gammas, const EquivalenceOptions& options = {});

/// Robustness equivalence on per-repetition failure counts.
bool equivalent_robustness(std::span<const double> failures_i, std::span<const double> failures_j,
                           const EquivalenceOptions& options = {});

double normal_cdf(double z);

}  // namespace votkit
