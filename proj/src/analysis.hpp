#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"
#include "measures.hpp"
#include "ranking.hpp"

namespace votkit {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of a p : (1-p) mixture of a failure component `f` and a success component `s`.
Moments mixture_moments(double p, const Moments& f, const Moments& s);

/// Sequences with one critical point at alpha*Ns (alpha uniform) where the tracker fails with probability p.
struct ReinitParams {
  double mu = 0.63;
  double sigma = 0.4;
  int N = 25;
  int Ns = 150;
  double p = 0.5;
  int delta = 15;  // frames lost after a reset

  void validate() const;
};

/// Attribute-A frames (mean mu_a) mixed with eta*N_A frames of other attributes or beta*N_A mislabelled ones (mu_b).
struct AnnotationParams {
  double mu_a = 0.0;
  double mu_b = 0.6;
  double sigma = 0.1;
  int N = 25;
  int NA = 50;
  double eta = 2.0;
  double beta = 0.1;

  void validate() const;
};

enum class ReinitEstimator { NOR, WIR };
enum class AnnotationEstimator { GLA, PFA };

Moments reinit_moments(ReinitEstimator kind, const ReinitParams& params);
Moments annotation_moments(AnnotationEstimator kind, const AnnotationParams& params);

/// Per-sequence mixture components of the no-reset estimator.
Moments nor_failure_component(const ReinitParams& params);
Moments nor_success_component(const ReinitParams& params);
Moments wir_failure_component(const ReinitParams& params);
Moments wir_success_component(const ReinitParams& params);

/// Per-frame overlap draws with the requested mean and standard deviation: a moment-matched Beta when
/// one exists on [0,1], otherwise a normal distribution.
class OverlapSampler {
 public:
  OverlapSampler(double mean, double stddev);
  double operator()(std::mt19937_64& rng);
  bool bounded() const noexcept { return beta_; }

 private:
  double mean_, stddev_;
  bool beta_ = false;
  std::gamma_distribution<double> ga_, gb_;
  std::normal_distribution<double> normal_;
};

struct EmpiricalMoments {
  Moments moments;
  double mean_se = 0.0;      // standard error of the mean
  double variance_se = 0.0;  // standard error of the variance
  std::size_t trials = 0;

  /// |mean - m.mean| and |variance - m.variance| both within k standard errors.
  bool agrees(const Moments& m, double k = 3.0) const;
};

EmpiricalMoments empirical_moments(const std::vector<double>& samples);

struct ReinitSimulation {
  EmpiricalMoments nor;
  EmpiricalMoments wir;
};
struct AnnotationSimulation {
  EmpiricalMoments gla;
  EmpiricalMoments pfa;
};

/// Monte Carlo of the thought experiment; each trial draws from its own seed derived from `seed`.
ReinitSimulation simulate_reinit(const ReinitParams& params, std::size_t trials, std::uint64_t seed);
AnnotationSimulation simulate_annotation(const AnnotationParams& params, std::size_t trials, std::uint64_t seed);

/// Random valid parameter set for sweeps.
ReinitParams random_reinit_params(std::mt19937_64& rng);
AnnotationParams random_annotation_params(std::mt19937_64& rng);

// ---------------------------------------------------------------------------

struct BurninCurve {
  std::vector<double> curve;       // mean overlap at offsets 1..horizon after an INIT
  std::vector<double> derivative;  // first difference, horizon - 1 values
  std::vector<std::size_t> counts;  // windows contributing at each offset
  std::size_t windows = 0;
};

/// Aligns every tracking segment on its INIT (the first one included) and averages overlaps per offset.
/// Throws InsufficientData when no segment exists.
BurninCurve burnin_curve(const std::vector<SequenceRecord>& dataset, const TrackerRuns& runs, int horizon);

struct RankVarianceOptions {
  std::size_t subset_size = 15;
  std::size_t n_subsets = 50;
  AggregateMode mode = AggregateMode::SequencePooled;
  RankOptions ranking;  // ranking.with_tests toggles the equivalence tests
  std::uint64_t seed = 0;
};

struct RankVarianceResult {
  double accuracy = 0.0;    // mean over trackers of the population variance of the accuracy rank
  double robustness = 0.0;
  double combined = 0.0;
  std::vector<double> accuracy_per_tracker;
  std::vector<double> robustness_per_tracker;
};

RankVarianceResult rank_variance_study(const std::vector<SequenceRecord>& dataset, const std::vector<TrackerRuns>& runs,
                                       const RankVarianceOptions& options);

enum class DifficultyLevel { Hard, Intermediate, IntermediateEasy, Easy };

std::string_view difficulty_level_name(DifficultyLevel level);
DifficultyLevel difficulty_level(double area);

struct DifficultyReport {
  std::string sequence;
  std::vector<int> counts;  // trackers failing at each frame
  double area = 0.0;
  int max = 0;
  std::size_t max_frame = 0;  // 0-based, first maximum
  DifficultyLevel level = DifficultyLevel::Easy;
};

std::vector<DifficultyReport> difficulty(const std::vector<SequenceRecord>& dataset,
                                         const std::vector<TrackerRuns>& runs);
std::string difficulty_csv(const std::vector<DifficultyReport>& reports);
std::string difficulty_curve_csv(const DifficultyReport& report);

enum class SamplingMode { Bootstrap, Subset };

struct EstimatorComparison {
  std::string tracker;
  Moments nor;
  Moments wir;
  std::size_t samples = 0;
  std::size_t subset_size = 0;
};

/// Per-sequence average overlap of a run without resets (every tracked frame, zeros after drift).
std::vector<double> sequence_nor_overlaps(const std::vector<SequenceRecord>& dataset, const TrackerRuns& runs);
/// Per-sequence accuracy of a run with resets (valid frames only); NaN where undefined.
std::vector<double> sequence_wir_overlaps(const std::vector<SequenceRecord>& dataset, const TrackerRuns& runs);

/// Draws `samples` sets of `subset_size` sequences (with or without replacement) and reports the mean and
/// variance of both dataset-level estimates across draws.
EstimatorComparison compare_estimators(const std::vector<SequenceRecord>& dataset, const TrackerRuns& nor_runs,
                                       const TrackerRuns& wir_runs, std::size_t subset_size, std::size_t samples,
                                       SamplingMode mode, std::uint64_t seed);

}  // namespace votkit
