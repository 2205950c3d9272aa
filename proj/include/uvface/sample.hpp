#pragma once

#include "uvface/image.hpp"
#include "uvface/mesh.hpp"
#include "uvface/posmap.hpp"

namespace uvface {

struct SampleMeta {
  double yaw_degrees = 0.0;
  BBox2 bbox;  // face bounding box in image pixels
};

/// An input image paired with its ground-truth position map.
struct Sample {
  RgbImage image;
  PositionMap posmap;
  SampleMeta meta;
};

}  // namespace uvface
