#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"

namespace votkit {

/// Per-frame state of a run. Code values match the results file encoding.
enum class FrameCode : int { Skip = 0, Init = 1, Fail = 2, Tracked = -1 };

struct TrajectoryEntry {
  FrameCode code = FrameCode::Skip;
  Region region;  // meaningful for Tracked only

  static TrajectoryEntry tracked(Region r) { return {FrameCode::Tracked, std::move(r)}; }
  static TrajectoryEntry of(FrameCode c) { return {c, Region::absent()}; }
};

struct Trajectory {
  std::vector<TrajectoryEntry> entries;
  /// Accuracy validity per frame; filled by mark_validity.
  std::vector<std::uint8_t> valid;

  std::size_t size() const noexcept { return entries.size(); }
  std::size_t count(FrameCode code) const;
  std::size_t failures() const { return count(FrameCode::Fail); }
};

/// A frame is valid for accuracy iff it carries a tracker region, its ground truth is present, and it lies
/// outside the `n_burnin` frames following an INIT.
void mark_validity(Trajectory& traj, const std::vector<Region>& groundtruth, int n_burnin);

/// Overlap with ground truth at valid frames, NaN elsewhere.
std::vector<double> frame_overlaps(const Trajectory& traj, const std::vector<Region>& groundtruth);

/// One line per frame: a region, or a bare code (`1` INIT, `2` FAIL, `0` SKIP).
std::string format_trajectory(const Trajectory& traj);
/// `where` names the source in error messages (file name).
Trajectory parse_trajectory(std::string_view text, const std::string& where);

Trajectory read_trajectory(const std::filesystem::path& file);
void write_trajectory(const std::filesystem::path& file, const Trajectory& traj);

}  // namespace votkit
