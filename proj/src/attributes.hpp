#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"
#include "image.hpp"

namespace votkit {

inline constexpr std::size_t kAttributeCount = 10;

struct AttributeVector {
  double illumination_change = 0.0;
  double size_change = 0.0;
  double object_motion = 0.0;
  double clutter = 0.0;
  double camera_motion = 0.0;
  double blur = 0.0;
  double aspect_ratio_change = 0.0;
  double color_change = 0.0;
  double deformation = 0.0;
  double scene_complexity = 0.0;

  std::array<double, kAttributeCount> values() const;
  static std::array<std::string_view, kAttributeCount> names();
};

struct AttributeOptions {
  std::uint64_t seed = 0;  // keypoint RANSAC
  int size_window = 15;
  int max_corners = 200;
  int ransac_iterations = 200;
  double inlier_threshold = 2.0;
};

/// Computes all ten global attributes from the sequence's frames and ground truth.
AttributeVector compute_attributes(const SequenceRecord& seq, const AttributeOptions& options = {});

// Building blocks, exposed for testing.

/// Pixels whose centers fall inside the region, as (x, y) pairs clipped to the image.
std::vector<std::pair<int, int>> region_pixels(const Region& r, int width, int height);
/// Mean translation between two grayscale frames estimated from matched corners (RANSAC, translation only).
std::optional<Point> estimate_translation(const std::vector<double>& a, const std::vector<double>& b, int width,
                                          int height, std::uint64_t seed, const AttributeOptions& options = {});
/// log(P) minus the entropy of the normalized DFT magnitude (P = pixel count); 0 for a flat spectrum.
double spectral_negentropy(const std::vector<double>& gray, int width, int height);
/// Sum over gray levels of b*log(b) for the level counts b.
double count_entropy(const std::vector<std::uint8_t>& gray);
/// HSV hue in turns [0,1); nullopt for achromatic pixels.
std::optional<double> hue_of(std::uint8_t r, std::uint8_t g, std::uint8_t b);

struct ClusterResult {
  std::vector<std::size_t> assignments;  // exemplar index of each point
  std::vector<std::size_t> exemplars;
  int iterations = 0;
  bool converged = false;
  double preference = 0.0;
};

struct AffinityOptions {
  std::optional<double> preference;  // default: median of off-diagonal similarities
  double damping = 0.5;
  int max_iter = 1000;
  int convergence_iter = 50;
};

ClusterResult affinity_propagation(const std::vector<std::vector<double>>& similarity,
                                   const AffinityOptions& options = {});

/// z-scores every attribute, clusters on negative squared distances and searches the shared preference
/// until the exemplar count reaches `target_clusters` (or the nearest count found).
ClusterResult select_dataset(const std::vector<AttributeVector>& vectors, std::size_t target_clusters,
                             const AffinityOptions& options = {});

std::string attributes_csv(const std::vector<std::string>& names, const std::vector<AttributeVector>& vectors,
                           const ClusterResult* clusters);

}  // namespace votkit
