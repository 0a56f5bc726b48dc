#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "geometry.hpp"
#include "process.hpp"

namespace votkit {

/// One tracker instance bound to one sequence; requests are strictly sequential.
class TrackerSession {
 public:
  virtual ~TrackerSession() = default;
  /// (Re)starts tracking at `frame`; returns the tracker's reported region for that frame.
  virtual Region initialize(std::size_t frame, const Region& region) = 0;
  virtual Region track(std::size_t frame) = 0;
  /// Orderly shutdown after the last request.
  virtual void finish() {}
};

/// Registry entry: either an in-process built-in or an external command speaking the wire protocol.
struct TrackerSpec {
  std::string name;
  std::string builtin;               // static | noisy_oracle | drifter; empty for commands
  std::vector<std::string> command;  // argv of an external tracker
  std::filesystem::path workdir;
  double timeout_s = 30.0;
  double amplitude = 0.1;  // noisy_oracle position/size amplitude
  double rotation = 0.0;   // noisy_oracle rotation amplitude (radians)
  double vx = 1.0, vy = 0.0;  // drifter velocity, pixels per frame

  bool is_builtin() const noexcept { return !builtin.empty(); }
};

struct SessionContext {
  const SequenceRecord* sequence = nullptr;
  std::uint64_t seed = 0;
  std::filesystem::path log_file;  // stderr of external trackers
};

std::unique_ptr<TrackerSession> open_session(const TrackerSpec& spec, const SessionContext& context);

/// Evaluator side of the wire protocol over a child process.
class ProtocolClient {
 public:
  /// Spawns the tracker and completes the hello handshake.
  ProtocolClient(const std::vector<std::string>& argv, const std::filesystem::path& workdir,
                 const std::filesystem::path& stderr_log, double timeout_s);
  Region initialize(const std::filesystem::path& frame, const Region& region);
  Region frame(const std::filesystem::path& frame);
  /// Sends quit and reaps the child.
  void quit();

 private:
  Region request(const std::string& line);
  ChildProcess child_;
  double timeout_s_;
  std::size_t requests_ = 0;
};

/// Full session: handshake, initialize on frames[0], one frame request per remaining path, quit.
/// Returns one region per frame (the first is the tracker's reply to initialize).
std::vector<Region> run_session(const std::vector<std::string>& argv, const std::filesystem::path& workdir,
                                const std::filesystem::path& stderr_log, double timeout_s, const Region& init_region,
                                const std::vector<std::filesystem::path>& frames);

}  // namespace votkit
