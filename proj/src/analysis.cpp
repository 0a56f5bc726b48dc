#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "error.hpp"
#include "seeding.hpp"

namespace votkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int integral_count(double ratio, int base, const char* what) {
  const double v = ratio * base;
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9) raise(ErrorKind::Parameter, std::string(what) + " * NA must be a whole number of frames");
  return static_cast<int>(r);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_variance(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

/// First `k` entries of a partial Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

Moments mixture_moments(double p, const Moments& f, const Moments& s) {
  if (!(p >= 0.0 && p <= 1.0)) raise(ErrorKind::Parameter, "mixture weight must lie in [0,1]");
  if (p == 0.0) return s;
  if (p == 1.0) return f;
  Moments m;
  m.mean = p * f.mean + (1.0 - p) * s.mean;
  const double d = f.mean - s.mean;
  m.variance = p * f.variance + (1.0 - p) * s.variance + p * (1.0 - p) * d * d;
  return m;
}

void ReinitParams::validate() const {
  if (!(mu >= 0.0 && mu <= 1.0)) raise(ErrorKind::Parameter, "mu_A must lie in [0,1]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) raise(ErrorKind::Parameter, "sigma_A must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) raise(ErrorKind::Parameter, "p must lie in [0,1]");
  if (N < 1 || Ns < 1) raise(ErrorKind::Parameter, "N and N_s must be >= 1");
  if (delta < 0 || delta >= Ns) raise(ErrorKind::Parameter, "Delta must satisfy 0 <= Delta < N_s");
}

void AnnotationParams::validate() const {
  if (!(mu_a >= 0.0 && mu_a <= 1.0) || !(mu_b >= 0.0 && mu_b <= 1.0))
    raise(ErrorKind::Parameter, "mean overlaps must lie in [0,1]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) raise(ErrorKind::Parameter, "sigma must be >= 0");
  if (N < 1 || NA < 1) raise(ErrorKind::Parameter, "N and N_A must be >= 1");
  if (!(eta >= 0.0) || !(beta >= 0.0) || !std::isfinite(eta) || !std::isfinite(beta))
    raise(ErrorKind::Parameter, "eta and beta must be >= 0");
}

Moments nor_failure_component(const ReinitParams& q) {
  return {q.mu / 2.0, q.sigma * q.sigma / (2.0 * q.Ns) + q.mu * q.mu / 12.0};
}
Moments nor_success_component(const ReinitParams& q) { return {q.mu, q.sigma * q.sigma / q.Ns}; }
Moments wir_failure_component(const ReinitParams& q) { return {q.mu, q.sigma * q.sigma / (q.Ns - q.delta)}; }
Moments wir_success_component(const ReinitParams& q) { return nor_success_component(q); }

Moments reinit_moments(ReinitEstimator kind, const ReinitParams& q) {
  q.validate();
  const double s2 = q.sigma * q.sigma, N = q.N, Ns = q.Ns, p = q.p, d = q.delta;
  if (kind == ReinitEstimator::NOR)
    return {q.mu * (1.0 - p / 2.0), (2.0 - p) * s2 / (2.0 * N * Ns) + p * (4.0 - 3.0 * p) * q.mu * q.mu / (12.0 * N)};
  return {q.mu, s2 * (Ns - d * (1.0 - p)) / (N * Ns * (Ns - d))};
}

Moments annotation_moments(AnnotationEstimator kind, const AnnotationParams& q) {
  q.validate();
  const double c = kind == AnnotationEstimator::GLA ? q.eta : q.beta;
  return {q.mu_a / (1.0 + c) + c * q.mu_b / (1.0 + c), q.sigma * q.sigma / (q.N * q.NA * (1.0 + c))};
}

OverlapSampler::OverlapSampler(double mean, double stddev) : mean_(mean), stddev_(stddev), normal_(mean, stddev) {
  const double var = stddev * stddev;
  if (stddev > 0.0 && mean > 0.0 && mean < 1.0 && var < mean * (1.0 - mean)) {
    const double nu = mean * (1.0 - mean) / var - 1.0;
    beta_ = true;
    ga_ = std::gamma_distribution<double>(mean * nu, 1.0);
    gb_ = std::gamma_distribution<double>((1.0 - mean) * nu, 1.0);
  }
}

double OverlapSampler::operator()(std::mt19937_64& rng) {
  if (stddev_ == 0.0) return mean_;
  if (!beta_) return normal_(rng);
  while (true) {
    const double a = ga_(rng), b = gb_(rng);
    if (a + b > 0.0) return a / (a + b);
  }
}

bool EmpiricalMoments::agrees(const Moments& m, double k) const {
  const double mean_tol = k * mean_se, var_tol = k * variance_se;
  return std::abs(moments.mean - m.mean) <= mean_tol + 1e-15 && std::abs(moments.variance - m.variance) <= var_tol + 1e-15;
}

EmpiricalMoments empirical_moments(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 4) raise(ErrorKind::InsufficientData, "need at least 4 samples for moment errors");
  const double mean = mean_of(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double dn = static_cast<double>(n);
  m4 /= dn;
  EmpiricalMoments e;
  e.trials = n;
  e.moments.mean = mean;
  e.moments.variance = m2 / (dn - 1.0);
  e.mean_se = std::sqrt(e.moments.variance / dn);
  const double s4 = e.moments.variance * e.moments.variance;
  e.variance_se = std::sqrt(std::max(0.0, (m4 - s4 * (dn - 3.0) / (dn - 1.0)) / dn));
  return e;
}

ReinitSimulation simulate_reinit(const ReinitParams& q, std::size_t trials, std::uint64_t seed) {
  q.validate();
  if (trials < 100) raise(ErrorKind::Parameter, "at least 100 trials are required");
  std::vector<double> nor(trials), wir(trials);
  std::vector<double> frames(static_cast<std::size_t>(q.Ns));
  const std::size_t Ns = static_cast<std::size_t>(q.Ns), delta = static_cast<std::size_t>(q.delta);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(sub_seed(seed, trial));
    OverlapSampler sample(q.mu, q.sigma);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double nor_sum = 0.0, wir_sum = 0.0;
    for (int j = 0; j < q.N; ++j) {
      const double alpha = unit(rng);
      const bool fails = unit(rng) < q.p;
      for (auto& f : frames) f = sample(rng);
      // Frame i is tracked before the critical point when its center i + 0.5 lies before alpha * Ns.
      const double critical = alpha * q.Ns;
      const std::size_t kept = std::min(Ns, static_cast<std::size_t>(std::max(0.0, std::ceil(critical - 0.5))));
      double all = 0.0, before = 0.0;
      for (std::size_t i = 0; i < Ns; ++i) {
        all += frames[i];
        if (i < kept) before += frames[i];
      }
      if (!fails) {
        nor_sum += all / q.Ns;
        wir_sum += all / q.Ns;
        continue;
      }
      nor_sum += before / q.Ns;
      // With resets the Delta frames from the critical point on are lost (fewer at the sequence end).
      const std::size_t drop_end = std::min(Ns, kept + delta);
      double lost = 0.0;
      for (std::size_t i = kept; i < drop_end; ++i) lost += frames[i];
      wir_sum += (all - lost) / static_cast<double>(Ns - (drop_end - kept));
    }
    nor[trial] = nor_sum / q.N;
    wir[trial] = wir_sum / q.N;
  }
  return {empirical_moments(nor), empirical_moments(wir)};
}

AnnotationSimulation simulate_annotation(const AnnotationParams& q, std::size_t trials, std::uint64_t seed) {
  q.validate();
  if (trials < 100) raise(ErrorKind::Parameter, "at least 100 trials are required");
  const int nb = integral_count(q.eta, q.NA, "eta");
  const int nf = integral_count(q.beta, q.NA, "beta");
  std::vector<double> gla(trials), pfa(trials);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(sub_seed(seed, trial));
    OverlapSampler sample_a(q.mu_a, q.sigma), sample_b(q.mu_b, q.sigma);
    double sum_a = 0.0, sum_b = 0.0, sum_f = 0.0;
    for (int j = 0; j < q.N; ++j) {
      for (int i = 0; i < q.NA; ++i) sum_a += sample_a(rng);
      for (int i = 0; i < nb; ++i) sum_b += sample_b(rng);
      for (int i = 0; i < nf; ++i) sum_f += sample_b(rng);
    }
    gla[trial] = (sum_a + sum_b) / (static_cast<double>(q.N) * (q.NA + nb));
    pfa[trial] = (sum_a + sum_f) / (static_cast<double>(q.N) * (q.NA + nf));
  }
  return {empirical_moments(gla), empirical_moments(pfa)};
}

ReinitParams random_reinit_params(std::mt19937_64& rng) {
  auto uni = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto uint = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  ReinitParams q;
  q.mu = uni(0.3, 0.85);
  q.sigma = uni(0.05, std::min(0.35, 0.9 * std::sqrt(q.mu * (1.0 - q.mu))));
  q.N = uint(5, 20);
  q.Ns = uint(40, 120);
  q.p = uni(0.0, 1.0);
  q.delta = uint(1, q.Ns / 10);
  return q;
}

AnnotationParams random_annotation_params(std::mt19937_64& rng) {
  auto uni = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto uint = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  AnnotationParams q;
  q.mu_a = uni(0.2, 0.8);
  q.mu_b = uni(0.2, 0.8);
  q.sigma = uni(0.05, 0.2);
  q.N = uint(5, 20);
  q.NA = uint(10, 50);
  q.eta = static_cast<double>(uint(0, 3 * q.NA)) / q.NA;
  q.beta = static_cast<double>(uint(0, q.NA / 5)) / q.NA;
  return q;
}

BurninCurve burnin_curve(const std::vector<SequenceRecord>& dataset, const TrackerRuns& runs, int horizon) {
  if (horizon < 2) raise(ErrorKind::Parameter, "burn-in horizon must be >= 2");
  if (runs.per_sequence.size() != dataset.size()) raise(ErrorKind::Shape, "results do not match the dataset");
  const std::size_t h = static_cast<std::size_t>(horizon);
  std::vector<double> sum(h, 0.0);
  BurninCurve out;
  out.counts.assign(h, 0);
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto& gt = dataset[s].groundtruth;
    for (const auto& traj : runs.per_sequence[s]) {
      for (std::size_t t0 = 0; t0 < traj.size(); ++t0) {
        if (traj.entries[t0].code != FrameCode::Init) continue;
        ++out.windows;
        for (std::size_t k = 1; k <= h && t0 + k < traj.size(); ++k) {
          const auto& e = traj.entries[t0 + k];
          if (e.code != FrameCode::Tracked) break;
          if (gt[t0 + k].is_absent()) continue;
          sum[k - 1] += overlap(e.region, gt[t0 + k]);
          ++out.counts[k - 1];
        }
      }
    }
  }
  if (out.windows == 0) raise(ErrorKind::InsufficientData, "no initialization found; burn-in curve is empty");
  out.curve.resize(h);
  for (std::size_t k = 0; k < h; ++k) out.curve[k] = out.counts[k] ? sum[k] / static_cast<double>(out.counts[k]) : kNaN;
  for (std::size_t k = 0; k + 1 < h; ++k) out.derivative.push_back(out.curve[k + 1] - out.curve[k]);
  return out;
}

RankVarianceResult rank_variance_study(const std::vector<SequenceRecord>& dataset, const std::vector<TrackerRuns>& runs,
                                       const RankVarianceOptions& options) {
  if (options.subset_size == 0 || options.subset_size > dataset.size())
    raise(ErrorKind::Parameter, "subset size " + std::to_string(options.subset_size) + " exceeds the " +
                                    std::to_string(dataset.size()) + " available sequences");
  if (options.n_subsets == 0) raise(ErrorKind::Parameter, "need at least one subset");
  const std::size_t n_trackers = runs.size();
  std::vector<std::vector<double>> acc(n_trackers), rob(n_trackers);
  std::mt19937_64 rng(options.seed);
  for (std::size_t s = 0; s < options.n_subsets; ++s) {
    auto idx = draw_without_replacement(dataset.size(), options.subset_size, rng);
    std::sort(idx.begin(), idx.end());
    std::vector<SequenceRecord> sub;
    for (auto i : idx) sub.push_back(dataset[i]);
    std::vector<TrackerRuns> sub_runs;
    for (const auto& r : runs) {
      TrackerRuns t;
      t.tracker = r.tracker;
      for (auto i : idx) t.per_sequence.push_back(r.per_sequence.at(i));
      sub_runs.push_back(std::move(t));
    }
    const auto table = rank_dataset(sub, sub_runs, options.mode, options.ranking);
    for (std::size_t i = 0; i < n_trackers; ++i) {
      acc[i].push_back(table.accuracy_rank[i]);
      rob[i].push_back(table.robustness_rank[i]);
    }
  }
  RankVarianceResult out;
  for (std::size_t i = 0; i < n_trackers; ++i) {
    out.accuracy_per_tracker.push_back(population_variance(acc[i]));
    out.robustness_per_tracker.push_back(population_variance(rob[i]));
  }
  if (n_trackers > 0) {
    out.accuracy = mean_of(out.accuracy_per_tracker);
    out.robustness = mean_of(out.robustness_per_tracker);
    out.combined = (out.accuracy + out.robustness) / 2.0;
  }
  return out;
}

std::string_view difficulty_level_name(DifficultyLevel level) {
  switch (level) {
    case DifficultyLevel::Hard: return "hard";
    case DifficultyLevel::Intermediate: return "intermediate";
    case DifficultyLevel::IntermediateEasy: return "intermediate/easy";
    case DifficultyLevel::Easy: return "easy";
  }
  return "";
}

DifficultyLevel difficulty_level(double area) {
  if (area > 3.0) return DifficultyLevel::Hard;
  if (area > 2.0) return DifficultyLevel::Intermediate;
  if (area > 1.0) return DifficultyLevel::IntermediateEasy;
  return DifficultyLevel::Easy;
}

std::vector<DifficultyReport> difficulty(const std::vector<SequenceRecord>& dataset,
                                         const std::vector<TrackerRuns>& runs) {
  if (runs.empty()) raise(ErrorKind::InsufficientData, "difficulty needs results of at least one tracker");
  std::vector<DifficultyReport> out;
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto& seq = dataset[s];
    DifficultyReport r;
    r.sequence = seq.name;
    r.counts.assign(seq.size(), 0);
    for (const auto& tracker : runs) {
      if (tracker.per_sequence.size() != dataset.size()) raise(ErrorKind::Shape, "results do not match the dataset");
      std::vector<std::uint8_t> failed(seq.size(), 0);
      for (const auto& traj : tracker.per_sequence[s]) {
        if (traj.size() != seq.size()) raise(ErrorKind::Shape, seq.name + ": trajectory length mismatch");
        for (std::size_t t = 0; t < traj.size(); ++t)
          if (traj.entries[t].code == FrameCode::Fail) failed[t] = 1;
      }
      for (std::size_t t = 0; t < seq.size(); ++t) r.counts[t] += failed[t];
    }
    long total = 0;
    for (std::size_t t = 0; t < r.counts.size(); ++t) {
      total += r.counts[t];
      if (r.counts[t] > r.max) {
        r.max = r.counts[t];
        r.max_frame = t;
      }
    }
    r.area = seq.size() ? static_cast<double>(total) / static_cast<double>(seq.size()) : 0.0;
    r.level = difficulty_level(r.area);
    out.push_back(std::move(r));
  }
  return out;
}

std::string difficulty_csv(const std::vector<DifficultyReport>& reports) {
  std::string out = "sequence,area,max,max_frame,level\n";
  for (const auto& r : reports) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", r.area);
    out += r.sequence + "," + buf + "," + std::to_string(r.max) + "," +
           (r.max > 0 ? std::to_string(r.max_frame + 1) : std::string("-")) + "," +
           std::string(difficulty_level_name(r.level)) + "\n";
  }
  return out;
}

std::string difficulty_curve_csv(const DifficultyReport& report) {
  std::string out = "frame,count\n";
  for (std::size_t t = 0; t < report.counts.size(); ++t)
    out += std::to_string(t + 1) + "," + std::to_string(report.counts[t]) + "\n";
  return out;
}

std::vector<double> sequence_nor_overlaps(const std::vector<SequenceRecord>& dataset, const TrackerRuns& runs) {
  if (runs.per_sequence.size() != dataset.size()) raise(ErrorKind::Shape, "results do not match the dataset");
  std::vector<double> out;
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto& gt = dataset[s].groundtruth;
    double seq_sum = 0.0;
    std::size_t reps = 0;
    for (const auto& traj : runs.per_sequence[s]) {
      double sum = 0.0;
      std::size_t frames = 0;
      for (std::size_t t = 0; t < traj.size(); ++t) {
        const auto& e = traj.entries[t];
        if (gt[t].is_absent() || e.code == FrameCode::Init) continue;
        if (e.code == FrameCode::Tracked) sum += overlap(e.region, gt[t]);
        ++frames;
      }
      if (frames == 0) continue;
      seq_sum += sum / static_cast<double>(frames);
      ++reps;
    }
    out.push_back(reps ? seq_sum / static_cast<double>(reps) : kNaN);
  }
  return out;
}

std::vector<double> sequence_wir_overlaps(const std::vector<SequenceRecord>& dataset, const TrackerRuns& runs) {
  if (runs.per_sequence.size() != dataset.size()) raise(ErrorKind::Shape, "results do not match the dataset");
  std::vector<double> out;
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto phi = per_frame_accuracy(dataset[s], runs.per_sequence[s]);
    double sum = 0.0;
    std::size_t n = 0;
    for (double v : phi)
      if (!std::isnan(v)) sum += v, ++n;
    out.push_back(n ? sum / static_cast<double>(n) : kNaN);
  }
  return out;
}

EstimatorComparison compare_estimators(const std::vector<SequenceRecord>& dataset, const TrackerRuns& nor_runs,
                                       const TrackerRuns& wir_runs, std::size_t subset_size, std::size_t samples,
                                       SamplingMode mode, std::uint64_t seed) {
  const auto nor = sequence_nor_overlaps(dataset, nor_runs);
  const auto wir = sequence_wir_overlaps(dataset, wir_runs);
  std::vector<std::size_t> pool;
  for (std::size_t s = 0; s < dataset.size(); ++s)
    if (!std::isnan(nor[s]) && !std::isnan(wir[s])) pool.push_back(s);
  if (pool.empty()) raise(ErrorKind::InsufficientData, "no sequence has both estimates");
  if (subset_size == 0) raise(ErrorKind::Parameter, "subset size must be >= 1");
  if (mode == SamplingMode::Subset && subset_size > pool.size())
    raise(ErrorKind::Parameter, "subset size exceeds the " + std::to_string(pool.size()) + " usable sequences");
  if (samples < 2) raise(ErrorKind::Parameter, "need at least two samples");

  std::mt19937_64 rng(seed);
  std::vector<double> nor_est, wir_est;
  for (std::size_t k = 0; k < samples; ++k) {
    std::vector<std::size_t> pick;
    if (mode == SamplingMode::Subset) {
      for (auto i : draw_without_replacement(pool.size(), subset_size, rng)) pick.push_back(pool[i]);
    } else {
      std::uniform_int_distribution<std::size_t> any(0, pool.size() - 1);
      for (std::size_t i = 0; i < subset_size; ++i) pick.push_back(pool[any(rng)]);
    }
    double a = 0.0, b = 0.0;
    for (auto s : pick) a += nor[s], b += wir[s];
    nor_est.push_back(a / static_cast<double>(pick.size()));
    wir_est.push_back(b / static_cast<double>(pick.size()));
  }
  auto moments = [](const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return Moments{m, s / static_cast<double>(v.size() - 1)};
  };
  EstimatorComparison c;
  c.tracker = wir_runs.tracker;
  c.nor = moments(nor_est);
  c.wir = moments(wir_est);
  c.samples = samples;
  c.subset_size = subset_size;
  return c;
}

}  // namespace votkit
