#include "uvface/mask_loss.hpp"

#include "uvface/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uvface {

RegionSegmentation segmentation_from_image(const GrayImage& image) {
  if (image.height != image.width || image.height <= 0) throw ShapeError("segmentation must be a non-empty square");
  RegionSegmentation seg;
  seg.size = image.height;
  seg.labels.reserve(image.data.size());
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    const std::uint8_t code = image.data[i];
    if (code > static_cast<std::uint8_t>(Region::landmark)) {
      throw InvalidArgument("unknown region label " + std::to_string(code) + " at pixel " + std::to_string(i));
    }
    seg.labels.push_back(static_cast<Region>(code));
  }
  return seg;
}

GrayImage segmentation_to_image(const RegionSegmentation& seg) {
  GrayImage img(seg.size, seg.size);
  std::transform(seg.labels.begin(), seg.labels.end(), img.data.begin(),
                 [](Region r) { return static_cast<std::uint8_t>(r); });
  return img;
}

void stamp_landmarks(RegionSegmentation& seg, const UvIndexTable& table) {
  table.check(seg.size);
  for (const auto& p : table.landmarks) seg.labels[static_cast<std::size_t>(p.row) * seg.size + p.col] = Region::landmark;
}

void check_landmark_labels(const RegionSegmentation& seg, const UvIndexTable& table) {
  table.check(seg.size);
  std::vector<std::uint8_t> expected(seg.labels.size(), 0);
  for (const auto& p : table.landmarks) expected[static_cast<std::size_t>(p.row) * seg.size + p.col] = 1;
  for (std::size_t i = 0; i < seg.labels.size(); ++i) {
    if ((seg.labels[i] == Region::landmark) != (expected[i] != 0)) {
      throw InvalidArgument("landmark labels do not match the uv index table at pixel " + std::to_string(i));
    }
  }
}

WeightRatio WeightRatio::parse(const std::string& text) {
  WeightRatio r;
  std::istringstream in(text);
  std::string part;
  int k = 0;
  while (std::getline(in, part, ':')) {
    if (k >= 4) throw InvalidArgument("weight ratio needs exactly 4 fields: " + text);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || part.empty() || !std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("invalid weight '" + part + "' in ratio " + text);
    }
    r.w[k++] = v;
  }
  if (k != 4) throw InvalidArgument("weight ratio needs exactly 4 fields: " + text);
  return r;
}

std::string WeightRatio::str() const {
  std::ostringstream out;
  out << w[0] << ':' << w[1] << ':' << w[2] << ':' << w[3];
  return out.str();
}

WeightMask build_mask(const RegionSegmentation& seg, const WeightRatio& ratio) {
  for (double v : ratio.w) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("weights must be finite and non-negative");
  }
  WeightMask mask;
  mask.size = seg.size;
  mask.weights.reserve(seg.labels.size());
  for (Region r : seg.labels) {
    switch (r) {
      case Region::landmark: mask.weights.push_back(ratio.w[0]); break;
      case Region::eye_nose_mouth: mask.weights.push_back(ratio.w[1]); break;
      case Region::face: mask.weights.push_back(ratio.w[2]); break;
      case Region::neck: mask.weights.push_back(ratio.w[3]); break;
      case Region::background: mask.weights.push_back(0.0); break;
      default: throw InvalidArgument("unknown region label");
    }
  }
  return mask;
}

GrayImage mask_to_image(const WeightMask& mask) {
  GrayImage img(mask.size, mask.size);
  const double top = mask.weights.empty() ? 0.0 : *std::max_element(mask.weights.begin(), mask.weights.end());
  for (std::size_t i = 0; i < mask.weights.size(); ++i) {
    img.data[i] = top > 0.0 ? static_cast<std::uint8_t>(std::lround(255.0 * mask.weights[i] / top)) : 0;
  }
  return img;
}

namespace {

void check_shapes(std::size_t pred, std::size_t target, std::size_t weights) {
  if (pred != target || pred != weights * 3) {
    throw ShapeError("loss inputs disagree: pred " + std::to_string(pred) + ", target " + std::to_string(target) +
                     ", weights " + std::to_string(weights) + " (expected 3 values per weight)");
  }
}

double positive_count(std::span<const double> weights) {
  return static_cast<double>(std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
}

}  // namespace

double weighted_loss(std::span<const double> pred, std::span<const double> target, std::span<const double> weights,
                     const LossConfig& cfg) {
  check_shapes(pred.size(), target.size(), weights.size());
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    const double dx = pred[3 * k] - target[3 * k];
    const double dy = pred[3 * k + 1] - target[3 * k + 1];
    const double dz = pred[3 * k + 2] - target[3 * k + 2];
    const double sq = dx * dx + dy * dy + dz * dz;
    total += w * (cfg.norm == LossNorm::squared_l2 ? sq : std::sqrt(sq));
  }
  if (cfg.reduction == LossReduction::mean_positive) {
    const double n = positive_count(weights);
    return n > 0.0 ? total / n : 0.0;
  }
  return total;
}

void weighted_loss_grad(std::span<const double> pred, std::span<const double> target,
                        std::span<const double> weights, const LossConfig& cfg, std::span<double> grad) {
  check_shapes(pred.size(), target.size(), weights.size());
  if (grad.size() != pred.size()) throw ShapeError("gradient buffer has the wrong size");
  double scale = 1.0;
  if (cfg.reduction == LossReduction::mean_positive) {
    const double n = positive_count(weights);
    scale = n > 0.0 ? 1.0 / n : 0.0;
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double w = weights[k] * scale;
    double d[3];
    for (int c = 0; c < 3; ++c) d[c] = pred[3 * k + c] - target[3 * k + c];
    double factor = 0.0;
    if (w != 0.0) {
      if (cfg.norm == LossNorm::squared_l2) {
        factor = 2.0 * w;
      } else {
        const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        factor = len > 0.0 ? w / len : 0.0;
      }
    }
    for (int c = 0; c < 3; ++c) grad[3 * k + c] = factor * d[c];
  }
}

namespace {
void check_maps(const PositionMap& pred, const PositionMap& target, const WeightMask& mask) {
  if (pred.size() != target.size() || pred.size() != mask.size) {
    throw ShapeError("position maps and weight mask differ in size");
  }
}
}  // namespace

double weighted_loss(const PositionMap& pred, const PositionMap& target, const WeightMask& mask,
                     const LossConfig& cfg) {
  check_maps(pred, target, mask);
  return weighted_loss(pred.data(), target.data(), mask.weights, cfg);
}

std::vector<double> weighted_loss_grad(const PositionMap& pred, const PositionMap& target, const WeightMask& mask,
                                       const LossConfig& cfg) {
  check_maps(pred, target, mask);
  std::vector<double> grad(pred.data().size());
  weighted_loss_grad(pred.data(), target.data(), mask.weights, cfg, grad);
  return grad;
}

}  // namespace uvface
