#include "trackers.hpp"

#include <algorithm>
#include <random>

#include "error.hpp"
#include "protocol.hpp"

namespace votkit {

namespace {

const Region& groundtruth_at(const SessionContext& ctx, std::size_t frame) {
  if (ctx.sequence == nullptr || frame >= ctx.sequence->size())
    raise(ErrorKind::InvalidArgument, "frame " + std::to_string(frame) + " outside the sequence");
  return ctx.sequence->groundtruth[frame];
}

class StaticTracker : public TrackerSession {
 public:
  Region initialize(std::size_t, const Region& region) override {
    region_ = region;
    return region_;
  }
  Region track(std::size_t) override { return region_; }

 private:
  Region region_;
};

class NoisyOracle : public TrackerSession {
 public:
  NoisyOracle(const SessionContext& ctx, double amplitude, double rotation) : ctx_(ctx), rng_(ctx.seed) {
    spec_.position_amplitude = amplitude;
    spec_.size_amplitude = amplitude;
    spec_.rotation_amplitude = rotation;
  }
  Region initialize(std::size_t, const Region& region) override {
    last_ = region;
    return last_;
  }
  Region track(std::size_t frame) override {
    const auto& gt = groundtruth_at(ctx_, frame);
    if (!gt.is_absent()) last_ = perturb(gt, spec_, rng_);
    return last_;
  }

 private:
  SessionContext ctx_;
  PerturbationSpec spec_;
  std::mt19937_64 rng_;
  Region last_;
};

class Drifter : public TrackerSession {
 public:
  Drifter(const SessionContext& ctx, double vx, double vy) : ctx_(ctx), vx_(vx), vy_(vy) {}
  Region initialize(std::size_t frame, const Region& region) override {
    init_frame_ = frame;
    init_ = region;
    return region;
  }
  Region track(std::size_t frame) override {
    const double k = static_cast<double>(frame) - static_cast<double>(init_frame_);
    const auto& gt = groundtruth_at(ctx_, frame);
    return (gt.is_absent() ? init_ : gt).translated(vx_ * k, vy_ * k);
  }

 private:
  SessionContext ctx_;
  double vx_, vy_;
  std::size_t init_frame_ = 0;
  Region init_;
};

class ProcessTracker : public TrackerSession {
 public:
  ProcessTracker(const TrackerSpec& spec, const SessionContext& ctx)
      : ctx_(ctx), client_(spec.command, spec.workdir, ctx.log_file, spec.timeout_s) {}
  Region initialize(std::size_t frame, const Region& region) override {
    return client_.initialize(frame_path(frame), region);
  }
  Region track(std::size_t frame) override { return client_.frame(frame_path(frame)); }
  void finish() override { client_.quit(); }

 private:
  std::filesystem::path frame_path(std::size_t frame) const {
    if (ctx_.sequence == nullptr || frame >= ctx_.sequence->frames.size())
      raise(ErrorKind::InvalidArgument, "no image for frame " + std::to_string(frame));
    return std::filesystem::absolute(ctx_.sequence->frames[frame]);
  }
  SessionContext ctx_;
  ProtocolClient client_;
};

}  // namespace

std::unique_ptr<TrackerSession> open_session(const TrackerSpec& spec, const SessionContext& context) {
  if (!spec.is_builtin()) return std::make_unique<ProcessTracker>(spec, context);
  if (spec.builtin == "static") return std::make_unique<StaticTracker>();
  if (spec.builtin == "noisy_oracle") return std::make_unique<NoisyOracle>(context, spec.amplitude, spec.rotation);
  if (spec.builtin == "drifter") return std::make_unique<Drifter>(context, spec.vx, spec.vy);
  raise(ErrorKind::Config, "unknown built-in tracker '" + spec.builtin + "'");
}

ProtocolClient::ProtocolClient(const std::vector<std::string>& argv, const std::filesystem::path& workdir,
                               const std::filesystem::path& stderr_log, double timeout_s)
    : child_(argv, workdir, stderr_log), timeout_s_(timeout_s) {
  try {
    const auto line = child_.read_line(timeout_s_);
    if (!line) raise(ErrorKind::Crash, "tracker exited before hello");
    const auto m = parse_message(*line);
    if (!std::holds_alternative<HelloMessage>(m)) raise(ErrorKind::Protocol, "expected hello, got '" + *line + "'");
  } catch (...) {
    child_.kill();
    throw;
  }
}

Region ProtocolClient::request(const std::string& line) {
  const std::size_t index = requests_++;
  try {
    child_.write_line(line, timeout_s_);
    const auto reply = child_.read_line(timeout_s_);
    if (!reply) raise(ErrorKind::Crash, "tracker exited during request " + std::to_string(index));
    const auto m = parse_message(*reply);
    const auto* status = std::get_if<StatusMessage>(&m);
    if (status == nullptr) raise(ErrorKind::Protocol, "expected status, got '" + *reply + "'");
    return status->region;
  } catch (const Error& e) {
    child_.kill();
    raise(e.kind(), "request " + std::to_string(index) + ": " + e.what());
  }
}

Region ProtocolClient::initialize(const std::filesystem::path& frame, const Region& region) {
  return request(format_message(InitializeMessage{frame.string(), region}));
}

Region ProtocolClient::frame(const std::filesystem::path& frame) {
  return request(format_message(FrameMessage{frame.string()}));
}

void ProtocolClient::quit() {
  if (!child_.running()) return;
  try {
    child_.write_line(format_message(QuitMessage{}), timeout_s_);
  } catch (const Error&) {
    // A tracker that already left after its last reply is fine.
  }
  child_.close(std::min(timeout_s_, 5.0));
}

std::vector<Region> run_session(const std::vector<std::string>& argv, const std::filesystem::path& workdir,
                                const std::filesystem::path& stderr_log, double timeout_s, const Region& init_region,
                                const std::vector<std::filesystem::path>& frames) {
  if (frames.empty()) raise(ErrorKind::InvalidArgument, "session needs at least one frame");
  ProtocolClient client(argv, workdir, stderr_log, timeout_s);
  std::vector<Region> out;
  out.reserve(frames.size());
  out.push_back(client.initialize(std::filesystem::absolute(frames[0]), init_region));
  for (std::size_t i = 1; i < frames.size(); ++i) out.push_back(client.frame(std::filesystem::absolute(frames[i])));
  client.quit();
  return out;
}

}  // namespace votkit
