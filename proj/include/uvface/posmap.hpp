#pragma once

#include "uvface/mesh.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace uvface {

inline constexpr int kDefaultMapSize = 256;

/// Square H x W x 3 image of (x, y, z) positions in UV space plus a coverage mask.
/// Row r, column c samples uv = ((c + 0.5) / W, (r + 0.5) / H); invalid pixels hold (0, 0, 0).
class PositionMap {
 public:
  PositionMap() = default;
  explicit PositionMap(int size);

  int size() const { return size_; }
  int width() const { return size_; }
  int height() const { return size_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(size_) * size_; }

  Vec3 at(int row, int col) const;
  void set(int row, int col, const Vec3& p);  // also marks the pixel valid
  void clear(int row, int col);               // zero + invalid
  bool valid(int row, int col) const { return valid_[index(row, col)] != 0; }
  std::size_t valid_count() const;

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<std::uint8_t>& mask() { return valid_; }
  const std::vector<std::uint8_t>& mask() const { return valid_; }

  /// Throws if any invalid pixel is non-zero or any valid pixel is non-finite.
  void check_invariants() const;

  bool operator==(const PositionMap&) const = default;

 private:
  std::size_t index(int row, int col) const { return static_cast<std::size_t>(row) * size_ + col; }

  int size_ = 0;
  std::vector<double> data_;         // row-major, 3 values per pixel
  std::vector<std::uint8_t> valid_;  // row-major, 0/1
};

struct PixelIndex {
  int row = 0;
  int col = 0;
  bool operator==(const PixelIndex&) const = default;
};

/// Pixel that contains a uv coordinate (clamped to the map).
PixelIndex uv_to_pixel(const Vec2& uv, int size);

/// Fixed map locations of the 68 landmarks (and optionally every vertex).
struct UvIndexTable {
  int size = 0;
  std::vector<PixelIndex> landmarks;  // 68 entries
  std::vector<PixelIndex> vertices;   // empty or one per mesh vertex

  void check(int map_size) const;
};

UvIndexTable make_uv_index_table(const Mesh& mesh, int size, bool per_vertex = false);

/// Per-pixel triangle coverage of the uv layout: pixel centers inside a triangle
/// (edges inclusive) take that triangle; the lowest triangle index wins ties.
struct UvRaster {
  int size = 0;
  std::vector<int> triangle;        // -1 where uncovered
  std::vector<Vec3> barycentric;    // weights of the triangle's three vertices
};

UvRaster rasterize_uv(const Mesh& mesh, int size);

/// Interpolates per-vertex values across the raster.
PositionMap bake_attribute(const Mesh& mesh, const UvRaster& raster, const std::vector<Vec3>& values);

PositionMap bake(const Mesh& mesh, int size = kDefaultMapSize);

/// One point per valid pixel in row-major order.
PointCloud unbake(const PositionMap& map);

/// Replaces vertex positions with the map value at each vertex's uv pixel.
/// Vertices whose pixel is invalid keep their original position.
Mesh unbake_mesh(const PositionMap& map, const Mesh& topology);

struct ResampleError {
  double mean = 0.0;
  double max = 0.0;
  std::size_t uncovered = 0;  // vertices whose pixel is not valid; excluded from the statistics
};

ResampleError resample_error(const Mesh& mesh, int map_size);

LandmarkSet landmarks_from_map(const PositionMap& map, const UvIndexTable& table);

// "UVPM" binary: magic, u32 version = 1, u32 height, u32 width, H*W*3 float32 (x,y,z)
// row-major, H*W validity bytes. All little-endian.
std::vector<std::uint8_t> encode_uvpm(const PositionMap& map);
PositionMap decode_uvpm(const std::vector<std::uint8_t>& bytes);
void save_uvpm(const PositionMap& map, const std::filesystem::path& path);
PositionMap load_uvpm(const std::filesystem::path& path);

// UV index table text file: header line `size N`, then 68 lines `row col`.
void save_uv_index_table(const UvIndexTable& table, const std::filesystem::path& path);
UvIndexTable load_uv_index_table(const std::filesystem::path& path);

}  // namespace uvface
