#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "measures.hpp"
#include "stats.hpp"

namespace votkit {

enum class Direction { HigherBetter, LowerBetter };

/// Ranks 1..N in the given direction; exact ties share the average of their positions.
std::vector<double> rank(std::span<const double> values, Direction direction);

using EquivalenceMatrix = std::vector<std::vector<bool>>;

enum class Correction { Mean, Min, Max };

/// Each tracker's group is itself plus every tracker directly equivalent to it (no transitive closure);
/// its corrected rank is the mean (or min/max) of the raw ranks in that group.
std::vector<double> corrected_ranks(std::span<const double> raw, const EquivalenceMatrix& equivalent,
                                    Correction correction = Correction::Mean);

struct RankOptions {
  bool with_tests = true;
  EquivalenceOptions equivalence;
  Correction correction = Correction::Mean;
};

/// Accuracy and robustness ranks of all trackers on one scope.
struct ScopeRanks {
  std::string scope;
  std::vector<double> accuracy;
  std::vector<double> robustness;
  std::vector<double> accuracy_raw;
  std::vector<double> robustness_raw;
  std::vector<double> accuracy_rank;  // corrected
  std::vector<double> robustness_rank;
  EquivalenceMatrix accuracy_equivalent;
  EquivalenceMatrix robustness_equivalent;
};

/// Throws UndefinedMeasure when some tracker has no valid frame in the scope.
ScopeRanks rank_scope(std::string scope, const std::vector<ScopeSeries>& per_tracker, const RankOptions& options = {});

struct RankTable {
  std::vector<std::string> trackers;
  std::vector<double> accuracy_rank;
  std::vector<double> robustness_rank;
  std::vector<double> combined;
  std::vector<std::string> scopes;  // scopes that contributed
};

double combined_rank(double accuracy_rank, double robustness_rank);

/// Averages corrected ranks across scopes per measure, then combines A and R.
RankTable aggregate(const std::vector<std::string>& trackers, const std::vector<ScopeRanks>& scopes);

enum class AggregateMode { SequencePooled, AttributeNormalized, SequenceNormalized };

std::string_view aggregate_mode_name(AggregateMode mode);
std::optional<AggregateMode> aggregate_mode_from_name(std::string_view name);

/// Ranks the trackers over the dataset. Scopes without frames or with an undefined accuracy are skipped.
RankTable rank_dataset(const std::vector<SequenceRecord>& dataset, const std::vector<TrackerRuns>& runs,
                       AggregateMode mode, const RankOptions& options = {});

struct ArPoint {
  std::string tracker;
  double accuracy_rank = 0.0;
  double robustness_rank = 0.0;
  double accuracy = 0.0;
  double reliability = 1.0;
};

/// One record per tracker: rank coordinates from `ranks`, raw coordinates from `measures` (same order).
std::vector<ArPoint> ar_plot_data(const RankTable& ranks, const std::vector<ScopeMeasures>& measures);

std::string ranks_csv(const RankTable& table, std::string_view scope);
std::string ar_points_csv(const std::vector<ArPoint>& points);
/// Scatter plot with the best trackers in the top-right corner.
std::string ar_svg(const std::vector<ArPoint>& points, bool raw);

}  // namespace votkit
