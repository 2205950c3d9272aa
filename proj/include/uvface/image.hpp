#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace uvface {

/// Row-major H x W x 3 RGB image with channel values in [0, 1].
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  RgbImage() = default;
  RgbImage(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w * 3, 0.0) {}

  double& at(int row, int col, int ch) { return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch]; }
  double at(int row, int col, int ch) const {
    return data[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
  }
  bool operator==(const RgbImage&) const = default;
};

/// Row-major single-channel 8-bit image.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w, 0) {}
};

/// Quantizes to 8 bits per channel (round to nearest, clamped).
void save_png(const RgbImage& image, const std::filesystem::path& path);
void save_png(const GrayImage& image, const std::filesystem::path& path);

/// Gray and gray+alpha inputs are expanded to RGB; alpha is dropped.
RgbImage load_png_rgb(const std::filesystem::path& path);
/// Requires a single-channel 8-bit PNG.
GrayImage load_png_gray(const std::filesystem::path& path);

}  // namespace uvface
