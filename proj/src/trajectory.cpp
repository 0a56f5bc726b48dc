#include "trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "text.hpp"

namespace votkit {

std::size_t Trajectory::count(FrameCode code) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [code](const TrajectoryEntry& e) { return e.code == code; }));
}

void mark_validity(Trajectory& traj, const std::vector<Region>& groundtruth, int n_burnin) {
  if (groundtruth.size() != traj.size())
    raise(ErrorKind::Shape, "trajectory has " + std::to_string(traj.size()) + " frames, ground truth " +
                                std::to_string(groundtruth.size()));
  if (n_burnin < 0) raise(ErrorKind::Parameter, "n_burnin must be >= 0");
  const std::size_t n = traj.size();
  traj.valid.assign(n, 0);
  std::size_t burn_end = 0;  // first frame past the current burn-in window
  for (std::size_t t = 0; t < n; ++t) {
    const auto& e = traj.entries[t];
    if (e.code == FrameCode::Init) {
      burn_end = t + 1 + static_cast<std::size_t>(n_burnin);
      continue;
    }
    if (e.code != FrameCode::Tracked || groundtruth[t].is_absent() || t < burn_end) continue;
    traj.valid[t] = 1;
  }
}

std::vector<double> frame_overlaps(const Trajectory& traj, const std::vector<Region>& groundtruth) {
  if (traj.valid.size() != traj.size()) raise(ErrorKind::Contract, "trajectory validity not marked");
  std::vector<double> out(traj.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t t = 0; t < traj.size(); ++t)
    if (traj.valid[t]) out[t] = overlap(traj.entries[t].region, groundtruth[t]);
  return out;
}

std::string format_trajectory(const Trajectory& traj) {
  std::string out;
  for (const auto& e : traj.entries) {
    if (e.code == FrameCode::Tracked) out += format_region(e.region);
    else out += std::to_string(static_cast<int>(e.code));
    out += '\n';
  }
  return out;
}

Trajectory parse_trajectory(std::string_view text, const std::string& where) {
  Trajectory traj;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    const std::string loc = where + ":" + std::to_string(line_no);
    if (line == "0") traj.entries.push_back(TrajectoryEntry::of(FrameCode::Skip));
    else if (line == "1") traj.entries.push_back(TrajectoryEntry::of(FrameCode::Init));
    else if (line == "2") traj.entries.push_back(TrajectoryEntry::of(FrameCode::Fail));
    else {
      try {
        traj.entries.push_back(TrajectoryEntry::tracked(parse_region(line)));
      } catch (const Error& e) {
        raise(ErrorKind::Format, loc + ": " + e.what());
      }
    }
  }
  if (traj.entries.empty()) raise(ErrorKind::Format, where + ": empty trajectory");
  return traj;
}

Trajectory read_trajectory(const std::filesystem::path& file) {
  return parse_trajectory(read_file(file), file.string());
}

void write_trajectory(const std::filesystem::path& file, const Trajectory& traj) {
  write_file_atomic(file, format_trajectory(traj));
}

}  // namespace votkit
