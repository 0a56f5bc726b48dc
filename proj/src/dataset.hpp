#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"

namespace votkit {

/// Per-frame visual attribute channels. Neutral is derived from the other five.
enum class Attribute : int {
  CameraMotion = 0,
  IlluminationChange,
  Occlusion,
  SizeChange,
  MotionChange,
  Neutral,
};

inline constexpr std::array<Attribute, 6> kAllAttributes{Attribute::CameraMotion, Attribute::IlluminationChange,
                                                         Attribute::Occlusion,    Attribute::SizeChange,
                                                         Attribute::MotionChange, Attribute::Neutral};
inline constexpr int kStoredAttributeCount = 5;

std::string_view attribute_name(Attribute a);
std::optional<Attribute> attribute_from_name(std::string_view name);

struct SequenceRecord {
  std::string name;
  std::vector<std::filesystem::path> frames;
  std::vector<Region> groundtruth;
  std::array<std::vector<std::uint8_t>, 6> attributes;
  double gamma = 0.0;

  std::size_t size() const noexcept { return groundtruth.size(); }
  bool has(Attribute a, std::size_t frame) const { return attributes[static_cast<int>(a)][frame] != 0; }

  /// Recomputes the neutral channel: set iff the other five are clear.
  void derive_neutral();
  /// Throws Format on any violated record invariant.
  void validate() const;
};

/// Fresh record with `n` frames, all-clear attribute channels and neutral derived.
SequenceRecord make_record(std::string name, std::vector<Region> groundtruth);

SequenceRecord load_sequence(const std::filesystem::path& dir);
/// Writes groundtruth.txt, attributes/*.tag and gamma.txt (frames are left untouched).
void write_sequence(const SequenceRecord& seq, const std::filesystem::path& dir);

/// Sequences listed in `list.txt` when present, else every subdirectory holding a groundtruth.txt.
std::vector<SequenceRecord> load_dataset(const std::filesystem::path& root);

std::string format_gamma(double gamma);

// ---------------------------------------------------------------------------
// Practical-difference threshold from repeated expert annotations.

struct AnnotatorBoxes {
  std::vector<int> frames;
  std::vector<std::vector<Region>> boxes;  // per frame, N = K*J boxes
};

/// Number of difference samples produced by estimate_gamma: M*N*((N-1)^2 - N + 1)/2.
std::uint64_t gamma_sample_count(std::uint64_t frames, std::uint64_t boxes_per_frame);

/// Mean absolute difference between pairs of overlaps measured against each box taken in turn as ground truth.
double estimate_gamma(const AnnotatorBoxes& annotations);

/// Lines of `<frame> <region>`; boxes of one frame may be interleaved with others.
AnnotatorBoxes read_annotations(const std::filesystem::path& file);

// ---------------------------------------------------------------------------
// Synthetic sequences.

enum class SynthEventKind { Occlude, Brighten, ShiftCamera, Deform };

std::string_view synth_event_name(SynthEventKind k);

struct SynthEvent {
  int begin = 0;  // inclusive frame index
  int end = 0;    // exclusive
  SynthEventKind kind = SynthEventKind::Occlude;
  double magnitude = 0.0;
};

struct SynthScript {
  std::string name = "synthetic";
  int length = 100;
  int width = 160;
  int height = 120;
  std::vector<Region> path;  // per-frame target region before camera motion and deformation
  std::vector<SynthEvent> events;
  std::uint64_t seed = 0;
  double gamma = 0.0;

  void validate() const;
};

/// Straight-line path for `length` frames starting at `start` moving by (vx, vy) per frame.
std::vector<Region> linear_path(const Region& start, int length, double vx, double vy);

/// Parses the `key = value` script format (see README).
SynthScript read_synth_script(const std::filesystem::path& file);

/// Randomized script with a few events of each kind; deterministic in `seed`.
SynthScript random_script(std::string name, int length, std::uint64_t seed);

/// Renders frames and writes the standard sequence layout under `out_dir`.
SequenceRecord synthesize(const SynthScript& script, const std::filesystem::path& out_dir);

/// Ground truth and attribute tags implied by a script, without rendering any frame.
SequenceRecord script_record(const SynthScript& script);

}  // namespace votkit
