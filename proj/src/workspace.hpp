#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "ranking.hpp"
#include "runner.hpp"
#include "trackers.hpp"

namespace votkit {

/// Contents of a workspace file (see README for the grammar). Relative paths are resolved against the
/// directory holding the file.
struct Workspace {
  std::filesystem::path file;
  std::filesystem::path dataset_root;
  std::filesystem::path results_root;
  std::filesystem::path reports_root;
  std::uint64_t seed = 0;
  double S = 100.0;  // reliability horizon
  RankOptions ranking;
  RunnerConfig runner;  // defaults shared by all experiments
  std::map<std::string, RunnerConfig> experiments;
  std::vector<TrackerSpec> trackers;

  const TrackerSpec& tracker(const std::string& name) const;
  const RunnerConfig& experiment(const std::string& name) const;
};

/// Parses a workspace file; errors carry the file, line and key involved.
Workspace parse_workspace(const std::string& text, const std::filesystem::path& file);
Workspace load_workspace(const std::filesystem::path& file);

// ---------------------------------------------------------------------------
// Pipelines behind the command line; each returns a one-line summary.

struct SynthOptions {
  int count = 5;
  int length = 100;
  double gamma = 0.05;
  std::optional<std::uint64_t> seed;  // falls back to the workspace seed
  std::vector<std::filesystem::path> scripts;  // when set, one sequence per script instead of random ones
};
std::string cmd_dataset_synth(const Workspace& ws, const SynthOptions& options);

struct AttributesCommand {
  std::optional<std::uint64_t> seed;
};
std::string cmd_dataset_attributes(const Workspace& ws, const AttributesCommand& options);

struct ClusterCommand {
  std::size_t clusters = 2;
  std::optional<std::uint64_t> seed;
};
std::string cmd_dataset_cluster(const Workspace& ws, const ClusterCommand& options);

struct GammaCommand {
  std::string sequence;                 // empty: every sequence with an annotations.txt
  std::filesystem::path annotations;    // required with `sequence`
};
std::string cmd_dataset_gamma(const Workspace& ws, const GammaCommand& options);

struct EvaluateCommand {
  std::vector<std::string> trackers;  // empty: every registered tracker
  std::string experiment = "baseline";
  int workers = 1;
  std::optional<std::uint64_t> seed;
};
std::string cmd_evaluate(const Workspace& ws, const EvaluateCommand& options);

struct AnalyzeCommand {
  std::string experiment = "baseline";
  std::vector<std::string> trackers;  // empty: every registered tracker with results
};
std::string cmd_analyze_measures(const Workspace& ws, const AnalyzeCommand& options);

struct RankCommand {
  AnalyzeCommand analyze;
  AggregateMode mode = AggregateMode::AttributeNormalized;
  std::optional<bool> with_tests;
};
std::string cmd_analyze_rank(const Workspace& ws, const RankCommand& options);

std::string cmd_analyze_difficulty(const Workspace& ws, const AnalyzeCommand& options);

struct BurninCommand {
  AnalyzeCommand analyze;
  int horizon = 50;
};
std::string cmd_analyze_burnin(const Workspace& ws, const BurninCommand& options);

struct RankVarianceCommand {
  AnalyzeCommand analyze;
  std::size_t subset_size = 15;
  std::size_t subsets = 50;
  AggregateMode mode = AggregateMode::SequencePooled;
  std::optional<std::uint64_t> seed;
};
std::string cmd_analyze_rank_variance(const Workspace& ws, const RankVarianceCommand& options);

struct EstimatorsCommand {
  std::string tracker;
  std::string nor_experiment = "noreset";
  std::string wir_experiment = "baseline";
  std::size_t subset_size = 15;
  std::size_t samples = 1000;
  SamplingMode sampling = SamplingMode::Subset;
  std::optional<std::uint64_t> seed;
};
std::string cmd_analyze_estimators(const Workspace& ws, const EstimatorsCommand& options);

struct SimulateCommand {
  std::string kind = "all";  // NOR | WIR | GLA | PFA | all
  std::size_t trials = 10000;
  ReinitParams reinit;
  AnnotationParams annotation;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output;  // default reports/simulate_estimators.json
};
/// Also returns the JSON document through `json` when non-null.
std::string cmd_simulate_estimators(const Workspace& ws, const SimulateCommand& options, std::string* json = nullptr);

struct PlotCommand {
  AnalyzeCommand analyze;
  AggregateMode mode = AggregateMode::AttributeNormalized;
  bool raw = false;
};
std::string cmd_plot_ar(const Workspace& ws, const PlotCommand& options);

/// Loads results of the selected trackers; trackers without any stored run are left out unless named.
std::vector<TrackerRuns> load_experiment_runs(const Workspace& ws, const std::vector<SequenceRecord>& dataset,
                                              const AnalyzeCommand& options);

}  // namespace votkit
