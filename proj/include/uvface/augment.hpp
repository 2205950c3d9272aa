#pragma once

#include "uvface/sample.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace uvface {

struct Occlusion {
  int row0 = 0;
  int col0 = 0;
  int height = 0;
  int width = 0;
  std::uint64_t noise_seed = 0;
};

/// Parameters of one training-set perturbation. Translation is a fraction of the
/// image size per axis. Rotation is in degrees, applied as the usual rotation
/// matrix in image coordinates (clockwise on screen, since +y points down).
struct AugmentParams {
  double rotation_degrees = 0.0;
  std::array<double, 2> translation{0.0, 0.0};
  double scale = 1.0;
  std::array<double, 3> channel_scales{1.0, 1.0, 1.0};
  std::optional<Occlusion> occlusion;

  bool is_identity() const;
  /// Throws InvalidArgument when a value falls outside the ranges below.
  void check() const;
};

struct AugmentRanges {
  double max_rotation_degrees = 45.0;
  double max_translation = 0.1;
  double min_scale = 0.9;
  double max_scale = 1.2;
  double min_channel_scale = 0.6;
  double max_channel_scale = 1.4;
  double occlusion_probability = 0.0;  // 0 disables occlusion entirely
  double min_occlusion_side = 0.1;     // fraction of image size
  double max_occlusion_side = 0.4;

  /// Throws InvalidArgument unless each range is ordered and lies inside the
  /// default ranges above, which bound every accepted AugmentParams.
  void check() const;
};

/// Uniform draws within the ranges; deterministic in the seed. Occlusion
/// rectangles are sized for an image of `image_size` pixels.
AugmentParams sample_params(std::uint64_t seed, int image_size = 256, const AugmentRanges& ranges = {});

/// The 2D similarity transform applied to image-plane coordinates: rotation and
/// scale about the image center followed by translation.
struct Similarity2 {
  double a = 1.0;  // scale * cos
  double b = 0.0;  // scale * sin
  double scale = 1.0;
  Vec2 center{0.0, 0.0};
  Vec2 shift{0.0, 0.0};

  static Similarity2 from(const AugmentParams& p, int width, int height);
  Vec2 apply(const Vec2& p) const;
  Vec2 inverse(const Vec2& q) const;
  /// x, y mapped by the similarity, z multiplied by the scale.
  Vec3 apply(const Vec3& p) const;
};

/// Warps the image (bilinear, zero outside), maps the position map values through
/// the same similarity, then applies channel scaling and occlusion to the image only.
Sample apply(const Sample& sample, const AugmentParams& params);

}  // namespace uvface
