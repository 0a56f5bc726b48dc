#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace votkit {

/// 8-bit interleaved image, 1 (gray) or 3 (RGB) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c) : width(w), height(h), channels(c), pixels(static_cast<std::size_t>(w) * h * c, 0) {}

  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

/// Reads binary P6 (PPM) or P5 (PGM), maxval 255.
Image read_pnm(const std::filesystem::path& path);
/// Writes P6 for 3 channels, P5 for 1 channel.
void write_pnm(const std::filesystem::path& path, const Image& image);

/// Luma-weighted grayscale intensities as doubles, row-major.
std::vector<double> to_gray(const Image& image);
/// Rounded 8-bit grayscale.
std::vector<std::uint8_t> to_gray8(const Image& image);

}  // namespace votkit
