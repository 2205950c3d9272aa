#pragma once

#include "uvface/image.hpp"
#include "uvface/posmap.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace uvface {

/// Region codes as stored in segmentation images.
enum class Region : std::uint8_t {
  background = 0,
  face = 1,            // other face area
  eye_nose_mouth = 2,
  neck = 3,
  landmark = 4,        // one of the 68 landmark pixels
};

struct RegionSegmentation {
  int size = 0;
  std::vector<Region> labels;  // row-major, size * size

  Region at(int row, int col) const { return labels[static_cast<std::size_t>(row) * size + col]; }
};

/// Converts a label image; throws on unknown codes or non-square input.
RegionSegmentation segmentation_from_image(const GrayImage& image);
GrayImage segmentation_to_image(const RegionSegmentation& seg);

/// Marks the 68 table pixels as landmarks, overriding whatever label they had.
void stamp_landmarks(RegionSegmentation& seg, const UvIndexTable& table);

/// Checks that the landmark pixels are exactly the table entries.
void check_landmark_labels(const RegionSegmentation& seg, const UvIndexTable& table);

/// Weights for landmark : eye/nose/mouth : other face : neck. Background is always 0.
struct WeightRatio {
  std::array<double, 4> w{16.0, 4.0, 3.0, 0.0};

  static WeightRatio parse(const std::string& text);  // "16:4:3:0"
  std::string str() const;
};

enum class LossNorm { squared_l2, l2 };
enum class LossReduction { sum, mean_positive };

struct LossConfig {
  WeightRatio ratio;
  LossNorm norm = LossNorm::squared_l2;
  LossReduction reduction = LossReduction::sum;
};

struct WeightMask {
  int size = 0;
  std::vector<double> weights;  // row-major, size * size

  double at(int row, int col) const { return weights[static_cast<std::size_t>(row) * size + col]; }
};

WeightMask build_mask(const RegionSegmentation& seg, const WeightRatio& ratio);
inline WeightMask build_mask(const RegionSegmentation& seg, const LossConfig& cfg) { return build_mask(seg, cfg.ratio); }

/// Gray rendering of a mask scaled so the largest weight maps to 255.
GrayImage mask_to_image(const WeightMask& mask);

// Flat-buffer forms: pred/target hold pixels*3 values, weights hold one value per pixel.
double weighted_loss(std::span<const double> pred, std::span<const double> target, std::span<const double> weights,
                     const LossConfig& cfg);
/// Writes dLoss/dpred into grad (pixels*3 values).
void weighted_loss_grad(std::span<const double> pred, std::span<const double> target,
                        std::span<const double> weights, const LossConfig& cfg, std::span<double> grad);

double weighted_loss(const PositionMap& pred, const PositionMap& target, const WeightMask& mask,
                     const LossConfig& cfg = {});
std::vector<double> weighted_loss_grad(const PositionMap& pred, const PositionMap& target, const WeightMask& mask,
                                       const LossConfig& cfg = {});

}  // namespace uvface
