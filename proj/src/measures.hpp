#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "trajectory.hpp"

namespace votkit {

/// All repetitions of one tracker, indexed like the dataset's sequences.
struct TrackerRuns {
  std::string tracker;
  std::vector<std::vector<Trajectory>> per_sequence;
};

struct Scope {
  enum class Kind { Pooled, Attribute, Sequence };
  Kind kind = Kind::Pooled;
  Attribute attribute = Attribute::Neutral;
  std::size_t sequence = 0;

  static Scope pooled() { return {}; }
  static Scope of_attribute(Attribute a) { return {Kind::Attribute, a, 0}; }
  static Scope of_sequence(std::size_t index) { return {Kind::Sequence, Attribute::Neutral, index}; }

  std::string label(const std::vector<SequenceRecord>& dataset) const;
};

/// Frame-aligned inputs of one tracker over one scope (a super-sequence of the frames it selects).
struct ScopeSeries {
  std::vector<double> phi;       // averaged per-frame accuracy, NaN when no repetition is valid
  std::vector<double> gamma;     // practical-difference threshold of each frame's sequence
  std::vector<double> failures;  // F(k) per repetition
  std::size_t frames = 0;
};

struct ScopeMeasures {
  std::optional<double> accuracy;  // empty when the scope has no valid frame
  double robustness = 0.0;         // mean failures per run
  double robustness_per100 = 0.0;  // failures per hundred frames
  double reliability = 1.0;
  std::size_t n_valid = 0;
  std::size_t frames = 0;
};

/// Phi_t: mean overlap over the repetitions valid at frame t (NaN if none is).
std::vector<double> per_frame_accuracy(const SequenceRecord& seq, const std::vector<Trajectory>& reps);

/// Mean of the non-NaN entries; throws UndefinedMeasure when there are none.
double accuracy(std::span<const double> phi);
/// Mean of per-run failure counts.
double robustness(std::span<const double> failures);
/// exp(-S * rho_r / frames): probability of running S frames without a failure.
double reliability(double rho_r, double frames, double S = 100.0);

ScopeSeries scope_series(const std::vector<SequenceRecord>& dataset, const TrackerRuns& runs, const Scope& scope);
ScopeMeasures summarize(const ScopeSeries& series, double S = 100.0);

/// Every scope of a kind: the pooled scope, the six attribute scopes, or one scope per sequence.
std::vector<Scope> scopes_of(Scope::Kind kind, const std::vector<SequenceRecord>& dataset);

struct MeasureRow {
  std::string tracker;
  std::string scope;
  ScopeMeasures measures;
};

std::vector<MeasureRow> measure_table(const std::vector<SequenceRecord>& dataset, const std::vector<TrackerRuns>& runs,
                                      double S = 100.0);
std::string measures_csv(const std::vector<MeasureRow>& rows);

}  // namespace votkit
