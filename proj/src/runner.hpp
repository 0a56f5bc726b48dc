#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "measures.hpp"
#include "trackers.hpp"
#include "trajectory.hpp"

namespace votkit {

struct RunnerConfig {
  int n_skip = 5;
  int n_burnin = 10;
  int n_rep = 15;
  double failure_threshold = 0.0;  // failure iff overlap <= threshold
  std::optional<PerturbationSpec> perturbation;  // noisy initialization when set
  bool reinit = true;  // false: run once from the first frame, never declaring failures
  std::uint64_t master_seed = 0;
  int workers = 1;

  void validate() const;
};

enum class RunStatus { Ok, Protocol, Timeout, Crash, Error };

const char* run_status_name(RunStatus s) noexcept;

struct RunResult {
  std::string tracker;
  std::string sequence;
  int rep = 1;  // 1-based, as in file names
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::Ok;
  std::string message;
  Trajectory trajectory;  // empty unless status is Ok
  double elapsed_s = 0.0;
};

/// Drives one repetition over a sequence; tracker errors propagate as exceptions.
/// `seed` feeds the initialization perturbation.
Trajectory run_repetition(TrackerSession& session, const SequenceRecord& seq, const RunnerConfig& cfg,
                          std::uint64_t seed);

/// Seed handed to the tracker itself for a job seed.
std::uint64_t tracker_seed(std::uint64_t job);

struct ResultsLocation {
  std::filesystem::path root;  // `results/`
  std::string experiment;
};

std::filesystem::path run_file(const ResultsLocation& where, const std::string& tracker, const std::string& sequence,
                               int rep, const char* extension);

/// Runs every (sequence, repetition) job, `cfg.workers` at a time. When `where` is given, trajectories and
/// metadata are written there as each job completes. Results come back in (sequence, rep) order.
std::vector<RunResult> run_experiment(const TrackerSpec& tracker, const std::vector<SequenceRecord>& dataset,
                                      const RunnerConfig& cfg, const std::optional<ResultsLocation>& where);

void write_run(const ResultsLocation& where, const RunResult& result);

/// Completed repetitions of one tracker, validity marked with `n_burnin`. Failed runs are left out.
TrackerRuns load_runs(const ResultsLocation& where, const std::string& tracker,
                      const std::vector<SequenceRecord>& dataset, int n_rep, int n_burnin);

/// Every trajectory file under `results_dir`, parsed; sorted by path.
std::vector<std::pair<std::filesystem::path, Trajectory>> deterministic_replay(const std::filesystem::path& results_dir);

}  // namespace votkit
