#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace votkit {

namespace {

double two_sided(double lower, double upper) { return std::min(1.0, 2.0 * std::min(lower, upper)); }

double normal_two_sided(double statistic, double mean, double variance) {
  if (variance <= 0.0) return 1.0;
  double d = statistic - mean;
  // Continuity correction toward the mean.
  if (d > 0) d = std::max(0.0, d - 0.5);
  else if (d < 0) d = std::min(0.0, d + 0.5);
  const double z = std::abs(d) / std::sqrt(variance);
  return std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
}

// Doubled average ranks are integers; work on those to count sums exactly.
std::vector<long> doubled(const std::vector<double>& ranks) {
  std::vector<long> out(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) out[i] = std::lround(2.0 * ranks[i]);
  return out;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

TestResult signed_rank(std::span<const double> differences, const SignedRankOptions& options) {
  std::vector<double> kept;
  for (double d : differences) {
    if (!std::isfinite(d)) raise(ErrorKind::InvalidArgument, "signed-rank input must be finite");
    if (d != 0.0 || options.zeros == ZeroHandling::Pratt) kept.push_back(d);
  }
  std::vector<double> magnitudes(kept.size());
  std::transform(kept.begin(), kept.end(), magnitudes.begin(), [](double d) { return std::abs(d); });
  const auto all_ranks = average_ranks(magnitudes);

  // Ranks of nonzero differences and their signs.
  std::vector<double> ranks;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] == 0.0) continue;
    ranks.push_back(all_ranks[i]);
    positive.push_back(kept[i] > 0.0);
  }

  TestResult result;
  result.n = ranks.size();
  if (ranks.empty()) return result;  // nothing but zeros: p = 1

  double w_plus = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i)
    if (positive[i]) w_plus += ranks[i];
  result.statistic = w_plus;

  if (ranks.size() <= options.exact_cutoff) {
    result.method = TestMethod::Exact;
    const auto r2 = doubled(ranks);
    const long total = std::accumulate(r2.begin(), r2.end(), 0L);
    // counts[s]: number of sign patterns whose doubled positive-rank sum is s.
    std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
    counts[0] = 1.0;
    long reach = 0;
    for (long r : r2) {
      for (long s = reach; s >= 0; --s)
        if (counts[s] != 0.0) counts[s + r] += counts[s];
      reach += r;
    }
    const long observed = std::lround(2.0 * w_plus);
    const double all = std::ldexp(1.0, static_cast<int>(ranks.size()));
    double lower = 0.0, upper = 0.0;
    for (long s = 0; s <= total; ++s) {
      if (s <= observed) lower += counts[s];
      if (s >= observed) upper += counts[s];
    }
    result.p_value = two_sided(lower / all, upper / all);
  } else {
    result.method = TestMethod::NormalApprox;
    double sum = 0.0, sum_sq = 0.0;
    for (double r : ranks) {
      sum += r;
      sum_sq += r * r;
    }
    result.p_value = normal_two_sided(w_plus, sum / 2.0, sum_sq / 4.0);
  }
  result.significant = result.p_value < options.alpha;
  return result;
}

TestResult rank_sum(std::span<const double> a, std::span<const double> b, const RankSumOptions& options) {
  if (a.empty() || b.empty()) raise(ErrorKind::InvalidArgument, "rank-sum needs two non-empty samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  for (double v : pooled)
    if (!std::isfinite(v)) raise(ErrorKind::InvalidArgument, "rank-sum input must be finite");
  const auto ranks = average_ranks(pooled);
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;

  double ra = 0.0;
  for (std::size_t i = 0; i < na; ++i) ra += ranks[i];
  const double offset = static_cast<double>(na) * (na + 1) / 2.0;

  TestResult result;
  result.n = n;
  result.statistic = ra - offset;

  if (n <= options.exact_cutoff) {
    result.method = TestMethod::Exact;
    // Enumerate every assignment of `na` pooled ranks to the first sample.
    const auto r2 = doubled(ranks);
    const long observed = std::lround(2.0 * ra);
    std::vector<std::size_t> pick(na);
    std::iota(pick.begin(), pick.end(), 0);
    double lower = 0.0, upper = 0.0, total = 0.0;
    while (true) {
      long s = 0;
      for (auto i : pick) s += r2[i];
      total += 1.0;
      if (s <= observed) lower += 1.0;
      if (s >= observed) upper += 1.0;
      std::size_t k = na;
      while (k > 0 && pick[k - 1] == n - na + k - 1) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t j = k; j < na; ++j) pick[j] = pick[j - 1] + 1;
    }
    result.p_value = two_sided(lower / total, upper / total);
  } else {
    result.method = TestMethod::NormalApprox;
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double ties = 0.0;
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      ties += t * t * t - t;
      i = j + 1;
    }
    const double dn = static_cast<double>(n);
    const double variance = static_cast<double>(na) * nb / 12.0 * ((dn + 1.0) - ties / (dn * (dn - 1.0)));
    result.p_value = normal_two_sided(result.statistic, static_cast<double>(na) * nb / 2.0, variance);
  }
  result.significant = result.p_value < options.alpha;
  return result;
}

bool practical_difference(std::span<const double> phi_i, std::span<const double> phi_j,
                          std::span<const double> gammas) {
  if (phi_i.size() != phi_j.size() || phi_i.size() != gammas.size())
    raise(ErrorKind::Shape, "practical-difference streams must have equal lengths");
  double scaled = 0.0, raw = 0.0;
  std::size_t t_used = 0;
  for (std::size_t t = 0; t < phi_i.size(); ++t) {
    const double d = phi_i[t] - phi_j[t];
    raw += d;
    if (gammas[t] > 0.0) {
      scaled += d / gammas[t];
      ++t_used;
    }
  }
  if (t_used == 0) return raw != 0.0;
  return std::abs(scaled) / static_cast<double>(t_used) > 1.0;
}

bool equivalent_accuracy(std::span<const double> phi_i, std::span<const double> phi_j,
                         std::span<const double> gammas, const EquivalenceOptions& options) {
  if (phi_i.size() != phi_j.size() || phi_i.size() != gammas.size())
    raise(ErrorKind::Shape, "accuracy streams must be frame-aligned");
  std::vector<double> a, b, g, d;
  for (std::size_t t = 0; t < phi_i.size(); ++t) {
    if (std::isnan(phi_i[t]) || std::isnan(phi_j[t])) continue;
    a.push_back(phi_i[t]);
    b.push_back(phi_j[t]);
    g.push_back(gammas[t]);
    d.push_back(phi_i[t] - phi_j[t]);
  }
  if (d.empty()) return true;
  if (!signed_rank(d, options.signed_rank).significant) return true;
  if (options.practical && !practical_difference(a, b, g)) return true;
  return false;
}

bool equivalent_robustness(std::span<const double> failures_i, std::span<const double> failures_j,
                           const EquivalenceOptions& options) {
  if (failures_i.empty() || failures_j.empty()) return true;
  return !rank_sum(failures_i, failures_j, options.rank_sum).significant;
}

}  // namespace votkit
