#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <random>
#include <thread>

#include "error.hpp"
#include "seeding.hpp"
#include "text.hpp"

namespace votkit {

namespace fs = std::filesystem;

namespace {

std::size_t next_present(const SequenceRecord& seq, std::size_t t) {
  while (t < seq.size() && seq.groundtruth[t].is_absent()) ++t;
  return t;
}

RunStatus status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Protocol: return RunStatus::Protocol;
    case ErrorKind::Timeout: return RunStatus::Timeout;
    case ErrorKind::Crash: return RunStatus::Crash;
    default: return RunStatus::Error;
  }
}

std::string meta_text(const RunResult& r) {
  std::string out;
  out += "seed = " + std::to_string(r.seed) + "\n";
  out += "status = " + std::string(run_status_name(r.status)) + "\n";
  out += "frames = " + std::to_string(r.trajectory.size()) + "\n";
  out += "failures = " + std::to_string(r.trajectory.failures()) + "\n";
  std::string msg = r.message;
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  out += "message = " + msg + "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "elapsed_s = %.6f\n", r.elapsed_s);
  out += buf;
  return out;
}

RunResult run_job(const TrackerSpec& tracker, const SequenceRecord& seq, const RunnerConfig& cfg, int rep,
                  const std::optional<ResultsLocation>& where) {
  RunResult r;
  r.tracker = tracker.name;
  r.sequence = seq.name;
  r.rep = rep;
  r.seed = job_seed(cfg.master_seed, tracker.name, seq.name, static_cast<std::uint64_t>(rep));
  const auto start = std::chrono::steady_clock::now();
  try {
    SessionContext ctx;
    ctx.sequence = &seq;
    ctx.seed = tracker_seed(r.seed);
    if (where && !tracker.is_builtin()) {
      ctx.log_file = run_file(*where, tracker.name, seq.name, rep, ".log");
      fs::create_directories(ctx.log_file.parent_path());
    }
    auto session = open_session(tracker, ctx);
    r.trajectory = run_repetition(*session, seq, cfg, r.seed);
    session->finish();
  } catch (const Error& e) {
    r.status = status_of(e.kind());
    r.message = e.what();
    r.trajectory = {};
  } catch (const std::exception& e) {
    r.status = RunStatus::Error;
    r.message = e.what();
    r.trajectory = {};
  }
  r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

void RunnerConfig::validate() const {
  if (n_skip < 0) raise(ErrorKind::Parameter, "n_skip must be >= 0");
  if (n_burnin < 0) raise(ErrorKind::Parameter, "n_burnin must be >= 0");
  if (n_rep < 1) raise(ErrorKind::Parameter, "n_rep must be >= 1");
  if (workers < 1) raise(ErrorKind::Parameter, "workers must be >= 1");
  if (!(failure_threshold >= 0.0 && failure_threshold < 1.0))
    raise(ErrorKind::Parameter, "failure threshold must lie in [0,1)");
  if (perturbation && (perturbation->position_amplitude < 0 || perturbation->size_amplitude < 0 ||
                       perturbation->rotation_amplitude < 0))
    raise(ErrorKind::Parameter, "perturbation amplitudes must be >= 0");
}

const char* run_status_name(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Protocol: return "protocol_error";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::Crash: return "crash";
    case RunStatus::Error: return "error";
  }
  return "error";
}

std::uint64_t tracker_seed(std::uint64_t job) { return sub_seed(job, 0); }

Trajectory run_repetition(TrackerSession& session, const SequenceRecord& seq, const RunnerConfig& cfg,
                          std::uint64_t seed) {
  std::mt19937_64 init_rng(sub_seed(seed, 1));
  const std::size_t n = seq.size();
  Trajectory traj;
  traj.entries.assign(n, TrajectoryEntry::of(FrameCode::Skip));

  std::size_t t = next_present(seq, 0);
  while (t < n) {
    Region init = seq.groundtruth[t];
    if (cfg.perturbation) init = perturb(init, *cfg.perturbation, init_rng);
    session.initialize(t, init);
    traj.entries[t] = TrajectoryEntry::of(FrameCode::Init);
    ++t;
    bool failed = false;
    for (; t < n; ++t) {
      Region out = session.track(t);
      const auto& gt = seq.groundtruth[t];
      if (cfg.reinit && !gt.is_absent() && overlap(out, gt) <= cfg.failure_threshold) {
        traj.entries[t] = TrajectoryEntry::of(FrameCode::Fail);
        failed = true;
        break;
      }
      traj.entries[t] = TrajectoryEntry::tracked(std::move(out));
    }
    if (!failed) break;
    // Frames after the failure stay SKIP until the next frame with a visible target past the skip window.
    t = next_present(seq, t + 1 + static_cast<std::size_t>(cfg.n_skip));
  }
  mark_validity(traj, seq.groundtruth, cfg.n_burnin);
  return traj;
}

fs::path run_file(const ResultsLocation& where, const std::string& tracker, const std::string& sequence, int rep,
                  const char* extension) {
  char name[64];
  std::snprintf(name, sizeof name, "_%03d%s", rep, extension);
  return where.root / tracker / where.experiment / sequence / (sequence + name);
}

void write_run(const ResultsLocation& where, const RunResult& result) {
  const auto txt = run_file(where, result.tracker, result.sequence, result.rep, ".txt");
  fs::create_directories(txt.parent_path());
  if (result.status == RunStatus::Ok) write_trajectory(txt, result.trajectory);
  else fs::remove(txt);
  write_file_atomic(run_file(where, result.tracker, result.sequence, result.rep, ".meta"), meta_text(result));
}

std::vector<RunResult> run_experiment(const TrackerSpec& tracker, const std::vector<SequenceRecord>& dataset,
                                      const RunnerConfig& cfg, const std::optional<ResultsLocation>& where) {
  cfg.validate();
  for (const auto& seq : dataset) seq.validate();
  std::vector<std::pair<std::size_t, int>> jobs;
  for (std::size_t s = 0; s < dataset.size(); ++s)
    for (int rep = 1; rep <= cfg.n_rep; ++rep) jobs.emplace_back(s, rep);

  std::vector<RunResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr io_error;
  auto worker = [&] {
    while (true) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      auto r = run_job(tracker, dataset[jobs[j].first], cfg, jobs[j].second, where);
      if (where) {
        try {
          write_run(*where, r);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!io_error) io_error = std::current_exception();
        }
      }
      results[j] = std::move(r);
    }
  };
  const int n_threads = std::min<int>(cfg.workers, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (io_error) std::rethrow_exception(io_error);
  return results;
}

TrackerRuns load_runs(const ResultsLocation& where, const std::string& tracker,
                      const std::vector<SequenceRecord>& dataset, int n_rep, int n_burnin) {
  TrackerRuns runs;
  runs.tracker = tracker;
  for (const auto& seq : dataset) {
    std::vector<Trajectory> reps;
    for (int rep = 1; rep <= n_rep; ++rep) {
      const auto file = run_file(where, tracker, seq.name, rep, ".txt");
      if (!fs::exists(file)) continue;
      auto traj = read_trajectory(file);
      if (traj.size() != seq.size())
        raise(ErrorKind::Format, file.string() + ": " + std::to_string(traj.size()) + " lines for " +
                                     std::to_string(seq.size()) + " frames");
      mark_validity(traj, seq.groundtruth, n_burnin);
      reps.push_back(std::move(traj));
    }
    runs.per_sequence.push_back(std::move(reps));
  }
  return runs;
}

std::vector<std::pair<fs::path, Trajectory>> deterministic_replay(const fs::path& results_dir) {
  if (!fs::is_directory(results_dir)) raise(ErrorKind::Io, results_dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(results_dir))
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::pair<fs::path, Trajectory>> out;
  for (const auto& f : files) out.emplace_back(f, read_trajectory(f));
  return out;
}

}  // namespace votkit
