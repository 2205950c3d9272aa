#include "uvface/augment.hpp"

#include "uvface/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace uvface {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53-bit mantissa draw; independent of the standard library's distribution implementation.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

bool AugmentParams::is_identity() const {
  return rotation_degrees == 0.0 && translation[0] == 0.0 && translation[1] == 0.0 && scale == 1.0 &&
         channel_scales == std::array<double, 3>{1.0, 1.0, 1.0} && !occlusion;
}

void AugmentParams::check() const {
  const AugmentRanges r;
  if (!in_range(rotation_degrees, -r.max_rotation_degrees, r.max_rotation_degrees)) {
    throw InvalidArgument("rotation outside [-45, 45] degrees");
  }
  for (double t : translation) {
    if (!in_range(t, -r.max_translation, r.max_translation)) throw InvalidArgument("translation outside [-0.1, 0.1]");
  }
  if (!in_range(scale, r.min_scale, r.max_scale)) throw InvalidArgument("scale outside [0.9, 1.2]");
  for (double c : channel_scales) {
    if (!in_range(c, r.min_channel_scale, r.max_channel_scale)) {
      throw InvalidArgument("channel scale outside [0.6, 1.4]");
    }
  }
  if (occlusion && (occlusion->height <= 0 || occlusion->width <= 0)) {
    throw InvalidArgument("occlusion rectangle must be non-empty");
  }
}

void AugmentRanges::check() const {
  const AugmentRanges d;
  if (!in_range(max_rotation_degrees, 0.0, d.max_rotation_degrees)) throw InvalidArgument("rotation range outside [0, 45]");
  if (!in_range(max_translation, 0.0, d.max_translation)) throw InvalidArgument("translation range outside [0, 0.1]");
  if (!(d.min_scale <= min_scale && min_scale <= max_scale && max_scale <= d.max_scale)) {
    throw InvalidArgument("scale range must be ordered within [0.9, 1.2]");
  }
  if (!(d.min_channel_scale <= min_channel_scale && min_channel_scale <= max_channel_scale &&
        max_channel_scale <= d.max_channel_scale)) {
    throw InvalidArgument("channel scale range must be ordered within [0.6, 1.4]");
  }
  if (!in_range(occlusion_probability, 0.0, 1.0)) throw InvalidArgument("occlusion probability outside [0, 1]");
  if (!(0.0 < min_occlusion_side && min_occlusion_side <= max_occlusion_side && max_occlusion_side <= 1.0)) {
    throw InvalidArgument("occlusion side range must be ordered within (0, 1]");
  }
}

AugmentParams sample_params(std::uint64_t seed, int image_size, const AugmentRanges& ranges) {
  ranges.check();
  std::mt19937_64 rng(seed);
  AugmentParams p;
  p.rotation_degrees = uniform(rng, -ranges.max_rotation_degrees, ranges.max_rotation_degrees);
  p.translation[0] = uniform(rng, -ranges.max_translation, ranges.max_translation);
  p.translation[1] = uniform(rng, -ranges.max_translation, ranges.max_translation);
  p.scale = uniform(rng, ranges.min_scale, ranges.max_scale);
  for (double& c : p.channel_scales) c = uniform(rng, ranges.min_channel_scale, ranges.max_channel_scale);
  if (ranges.occlusion_probability > 0.0 && uniform(rng, 0.0, 1.0) < ranges.occlusion_probability) {
    Occlusion o;
    auto side = [&] {
      const double frac = uniform(rng, ranges.min_occlusion_side, ranges.max_occlusion_side);
      return std::clamp(static_cast<int>(std::lround(frac * image_size)), 1, image_size);
    };
    o.height = side();
    o.width = side();
    o.row0 = static_cast<int>(uniform(rng, 0.0, 1.0) * (image_size - o.height + 1));
    o.col0 = static_cast<int>(uniform(rng, 0.0, 1.0) * (image_size - o.width + 1));
    o.noise_seed = rng();
    p.occlusion = o;
  }
  return p;
}

Similarity2 Similarity2::from(const AugmentParams& p, int width, int height) {
  const double theta = p.rotation_degrees * std::numbers::pi / 180.0;
  Similarity2 s;
  s.scale = p.scale;
  s.a = p.scale * std::cos(theta);
  s.b = p.scale * std::sin(theta);
  s.center = Vec2(0.5 * width, 0.5 * height);
  s.shift = Vec2(p.translation[0] * width, p.translation[1] * height);
  return s;
}

Vec2 Similarity2::apply(const Vec2& p) const {
  const Vec2 d = p - center;
  return Vec2(a * d.x() - b * d.y(), b * d.x() + a * d.y()) + center + shift;
}

Vec2 Similarity2::inverse(const Vec2& q) const {
  const Vec2 d = q - center - shift;
  const double det = a * a + b * b;
  return Vec2((a * d.x() + b * d.y()) / det, (-b * d.x() + a * d.y()) / det) + center;
}

Vec3 Similarity2::apply(const Vec3& p) const {
  const Vec2 xy = apply(Vec2(p.head<2>()));
  return Vec3(xy.x(), xy.y(), p.z() * scale);
}

namespace {

RgbImage warp_image(const RgbImage& src, const Similarity2& s) {
  RgbImage out(src.height, src.width);
  for (int row = 0; row < src.height; ++row) {
    for (int col = 0; col < src.width; ++col) {
      const Vec2 p = s.inverse(Vec2(col + 0.5, row + 0.5));
      const double fx = p.x() - 0.5;
      const double fy = p.y() - 0.5;
      const int x0 = static_cast<int>(std::floor(fx));
      const int y0 = static_cast<int>(std::floor(fy));
      const double tx = fx - x0;
      const double ty = fy - y0;
      for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const int y = y0 + dy;
            const int x = x0 + dx;
            if (y < 0 || x < 0 || y >= src.height || x >= src.width) continue;
            const double w = (dx ? tx : 1.0 - tx) * (dy ? ty : 1.0 - ty);
            if (w != 0.0) acc += w * src.at(y, x, ch);
          }
        }
        out.at(row, col, ch) = acc;
      }
    }
  }
  return out;
}

}  // namespace

Sample apply(const Sample& sample, const AugmentParams& params) {
  const int size = sample.posmap.size();
  if (sample.image.height != sample.image.width || sample.image.height != size) {
    throw ShapeError("sample image is " + std::to_string(sample.image.height) + "x" +
                     std::to_string(sample.image.width) + " but its position map is " + std::to_string(size));
  }
  if (params.is_identity()) return sample;
  params.check();

  const Similarity2 s = Similarity2::from(params, sample.image.width, sample.image.height);
  const bool geometric = params.rotation_degrees != 0.0 || params.scale != 1.0 || params.translation[0] != 0.0 ||
                         params.translation[1] != 0.0;

  Sample out;
  out.meta = sample.meta;
  out.image = geometric ? warp_image(sample.image, s) : sample.image;
  out.posmap = sample.posmap;
  if (geometric) {
    for (int row = 0; row < size; ++row) {
      for (int col = 0; col < size; ++col) {
        if (out.posmap.valid(row, col)) out.posmap.set(row, col, s.apply(sample.posmap.at(row, col)));
      }
    }
    const BBox2& bb = sample.meta.bbox;
    const std::array<Vec2, 4> corners{bb.min, Vec2(bb.max.x(), bb.min.y()), bb.max, Vec2(bb.min.x(), bb.max.y())};
    BBox2 nb{s.apply(corners[0]), s.apply(corners[0])};
    for (const auto& c : corners) {
      nb.min = nb.min.cwiseMin(s.apply(c));
      nb.max = nb.max.cwiseMax(s.apply(c));
    }
    out.meta.bbox = nb;
  }

  for (std::size_t i = 0; i < out.image.data.size(); ++i) {
    const double c = params.channel_scales[i % 3];
    if (c != 1.0) out.image.data[i] = std::clamp(out.image.data[i] * c, 0.0, 1.0);
  }
  if (params.occlusion) {
    const Occlusion& o = *params.occlusion;
    std::mt19937_64 rng(o.noise_seed);
    for (int row = o.row0; row < std::min(o.row0 + o.height, size); ++row) {
      for (int col = o.col0; col < std::min(o.col0 + o.width, size); ++col) {
        for (int ch = 0; ch < 3; ++ch) out.image.at(row, col, ch) = uniform(rng, 0.0, 1.0);
      }
    }
  }
  return out;
}

}  // namespace uvface
