#include "uvface/posmap.hpp"

#include "uvface/detail/binary_io.hpp"
#include "uvface/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace uvface {

PositionMap::PositionMap(int size) : size_(size) {
  if (size <= 0) throw InvalidArgument("position map size must be positive");
  data_.assign(pixel_count() * 3, 0.0);
  valid_.assign(pixel_count(), 0);
}

Vec3 PositionMap::at(int row, int col) const {
  const std::size_t i = index(row, col) * 3;
  return {data_[i], data_[i + 1], data_[i + 2]};
}

void PositionMap::set(int row, int col, const Vec3& p) {
  const std::size_t k = index(row, col);
  data_[k * 3] = p.x();
  data_[k * 3 + 1] = p.y();
  data_[k * 3 + 2] = p.z();
  valid_[k] = 1;
}

void PositionMap::clear(int row, int col) {
  const std::size_t k = index(row, col);
  data_[k * 3] = data_[k * 3 + 1] = data_[k * 3 + 2] = 0.0;
  valid_[k] = 0;
}

std::size_t PositionMap::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

void PositionMap::check_invariants() const {
  if (data_.size() != pixel_count() * 3 || valid_.size() != pixel_count()) {
    throw ShapeError("position map buffers do not match its size");
  }
  for (std::size_t k = 0; k < pixel_count(); ++k) {
    for (int c = 0; c < 3; ++c) {
      const double v = data_[k * 3 + c];
      if (valid_[k] ? !std::isfinite(v) : v != 0.0) {
        throw GeometryError(valid_[k] ? "non-finite value on a valid pixel" : "non-zero value on an invalid pixel");
      }
    }
  }
}

PixelIndex uv_to_pixel(const Vec2& uv, int size) {
  auto cell = [size](double t) { return std::clamp(static_cast<int>(std::floor(t * size)), 0, size - 1); };
  return {cell(uv.y()), cell(uv.x())};
}

void UvIndexTable::check(int map_size) const {
  if (landmarks.size() != kNumLandmarks) throw InvalidArgument("uv index table needs 68 landmark entries");
  if (size != map_size) {
    throw InvalidArgument("uv index table is for a " + std::to_string(size) + " map, not " + std::to_string(map_size));
  }
  auto in_bounds = [map_size](const PixelIndex& p) {
    return p.row >= 0 && p.col >= 0 && p.row < map_size && p.col < map_size;
  };
  for (const auto& p : landmarks) {
    if (!in_bounds(p)) {
      throw InvalidArgument("uv index (" + std::to_string(p.row) + ", " + std::to_string(p.col) +
                            ") outside a " + std::to_string(map_size) + " map");
    }
  }
  for (const auto& p : vertices) {
    if (!in_bounds(p)) throw InvalidArgument("per-vertex uv index outside the map");
  }
}

UvIndexTable make_uv_index_table(const Mesh& mesh, int size, bool per_vertex) {
  if (!mesh.has_uv()) throw InvalidArgument("mesh has no uv coordinates");
  if (mesh.landmark_indices.size() != kNumLandmarks) throw InvalidArgument("mesh has no landmark table");
  UvIndexTable table;
  table.size = size;
  for (int idx : mesh.landmark_indices) table.landmarks.push_back(uv_to_pixel(mesh.uv[idx], size));
  if (per_vertex) {
    for (const auto& uv : mesh.uv) table.vertices.push_back(uv_to_pixel(uv, size));
  }
  return table;
}

UvRaster rasterize_uv(const Mesh& mesh, int size) {
  if (size <= 0) throw InvalidArgument("map size must be positive");
  if (!mesh.has_uv()) throw InvalidArgument("mesh has no uv coordinates");
  validate(mesh);

  // Pixel centers exactly on a shared edge must not fall through the crack between
  // two triangles because of rounding.
  constexpr double kEdgeEps = 1e-12;

  UvRaster r;
  r.size = size;
  r.triangle.assign(static_cast<std::size_t>(size) * size, -1);
  r.barycentric.assign(static_cast<std::size_t>(size) * size, Vec3::Zero());

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2 a = mesh.uv[tri[0]] * size;
    const Vec2 b = mesh.uv[tri[1]] * size;
    const Vec2 c = mesh.uv[tri[2]] * size;
    const Vec2 ab = b - a;
    const Vec2 ac = c - a;
    const double det = ab.x() * ac.y() - ab.y() * ac.x();
    if (det == 0.0) continue;

    const double min_x = std::min({a.x(), b.x(), c.x()});
    const double max_x = std::max({a.x(), b.x(), c.x()});
    const double min_y = std::min({a.y(), b.y(), c.y()});
    const double max_y = std::max({a.y(), b.y(), c.y()});
    const int c0 = std::max(0, static_cast<int>(std::ceil(min_x - 0.5 - 1e-9)));
    const int c1 = std::min(size - 1, static_cast<int>(std::floor(max_x - 0.5 + 1e-9)));
    const int r0 = std::max(0, static_cast<int>(std::ceil(min_y - 0.5 - 1e-9)));
    const int r1 = std::min(size - 1, static_cast<int>(std::floor(max_y - 0.5 + 1e-9)));

    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        const std::size_t k = static_cast<std::size_t>(row) * size + col;
        if (r.triangle[k] >= 0) continue;
        const Vec2 ap = Vec2(col + 0.5, row + 0.5) - a;
        const double wb = (ap.x() * ac.y() - ap.y() * ac.x()) / det;
        const double wc = (ab.x() * ap.y() - ab.y() * ap.x()) / det;
        const double wa = 1.0 - wb - wc;
        if (wa >= -kEdgeEps && wb >= -kEdgeEps && wc >= -kEdgeEps) {
          r.triangle[k] = t;
          r.barycentric[k] = Vec3(wa, wb, wc);
        }
      }
    }
  }
  return r;
}

PositionMap bake_attribute(const Mesh& mesh, const UvRaster& raster, const std::vector<Vec3>& values) {
  if (values.size() != mesh.vertices.size()) throw ShapeError("attribute count does not match vertex count");
  PositionMap map(raster.size);
  for (int row = 0; row < raster.size; ++row) {
    for (int col = 0; col < raster.size; ++col) {
      const std::size_t k = static_cast<std::size_t>(row) * raster.size + col;
      const int t = raster.triangle[k];
      if (t < 0) continue;
      const auto& tri = mesh.triangles[t];
      const Vec3& w = raster.barycentric[k];
      map.set(row, col, w[0] * values[tri[0]] + w[1] * values[tri[1]] + w[2] * values[tri[2]]);
    }
  }
  return map;
}

PositionMap bake(const Mesh& mesh, int size) {
  if (!mesh.has_uv()) throw InvalidArgument("bake requires uv coordinates");
  if (size <= 0) throw InvalidArgument("bake requires a positive map size");
  return bake_attribute(mesh, rasterize_uv(mesh, size), mesh.vertices);
}

PointCloud unbake(const PositionMap& map) {
  PointCloud cloud;
  cloud.points.reserve(map.valid_count());
  for (int row = 0; row < map.size(); ++row) {
    for (int col = 0; col < map.size(); ++col) {
      if (map.valid(row, col)) cloud.points.push_back(map.at(row, col));
    }
  }
  return cloud;
}

Mesh unbake_mesh(const PositionMap& map, const Mesh& topology) {
  if (!topology.has_uv()) throw InvalidArgument("topology mesh has no uv coordinates");
  Mesh out = topology;
  for (std::size_t i = 0; i < out.vertices.size(); ++i) {
    const PixelIndex px = uv_to_pixel(out.uv[i], map.size());
    if (map.valid(px.row, px.col)) out.vertices[i] = map.at(px.row, px.col);
  }
  return out;
}

ResampleError resample_error(const Mesh& mesh, int map_size) {
  const PositionMap map = bake(mesh, map_size);
  ResampleError err;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const PixelIndex px = uv_to_pixel(mesh.uv[i], map_size);
    if (!map.valid(px.row, px.col)) {
      ++err.uncovered;
      continue;
    }
    const double d = (map.at(px.row, px.col) - mesh.vertices[i]).norm();
    sum += d;
    err.max = std::max(err.max, d);
    ++n;
  }
  err.mean = n > 0 ? sum / static_cast<double>(n) : 0.0;
  return err;
}

LandmarkSet landmarks_from_map(const PositionMap& map, const UvIndexTable& table) {
  table.check(map.size());
  LandmarkSet set;
  for (int i = 0; i < kNumLandmarks; ++i) set.points[i] = map.at(table.landmarks[i].row, table.landmarks[i].col);
  return set;
}

namespace {
constexpr char kUvpmMagic[4] = {'U', 'V', 'P', 'M'};
constexpr std::uint32_t kUvpmVersion = 1;
}  // namespace

std::vector<std::uint8_t> encode_uvpm(const PositionMap& map) {
  detail::ByteWriter w;
  w.bytes(kUvpmMagic, 4);
  w.u32(kUvpmVersion);
  w.u32(static_cast<std::uint32_t>(map.height()));
  w.u32(static_cast<std::uint32_t>(map.width()));
  for (double v : map.data()) w.f32(static_cast<float>(v));
  for (std::uint8_t m : map.mask()) w.u8(m ? 1 : 0);
  return std::move(w.buffer());
}

PositionMap decode_uvpm(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader r(bytes);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (!std::equal(magic, magic + 4, kUvpmMagic)) throw CorruptFileError("bad magic, expected UVPM", 0);
  const std::size_t version_at = r.offset();
  if (r.u32("version") != kUvpmVersion) throw CorruptFileError("unsupported UVPM version", version_at);
  const std::size_t dims_at = r.offset();
  const std::uint32_t h = r.u32("height");
  const std::uint32_t w = r.u32("width");
  if (h == 0 || h != w) throw CorruptFileError("UVPM map must be square and non-empty", dims_at);
  if (h > 16384) throw CorruptFileError("UVPM dimensions implausibly large", dims_at);

  PositionMap map(static_cast<int>(h));
  const std::size_t n = map.pixel_count();
  for (std::size_t i = 0; i < n * 3; ++i) map.data()[i] = static_cast<double>(r.f32("position data"));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = r.offset();
    const std::uint8_t m = r.u8("validity mask");
    if (m > 1) throw CorruptFileError("validity byte must be 0 or 1", at);
    map.mask()[i] = m;
    for (int c = 0; c < 3; ++c) {
      const double v = map.data()[i * 3 + c];
      if (m ? !std::isfinite(v) : v != 0.0) {
        throw CorruptFileError("pixel data violates the validity mask", 16 + (i * 3 + c) * 4);
      }
    }
  }
  if (r.remaining() != 0) throw CorruptFileError("trailing bytes after UVPM payload", r.offset());
  return map;
}

void save_uvpm(const PositionMap& map, const std::filesystem::path& path) {
  detail::write_binary(path, encode_uvpm(map));
}

PositionMap load_uvpm(const std::filesystem::path& path) { return decode_uvpm(detail::read_binary(path)); }

void save_uv_index_table(const UvIndexTable& table, const std::filesystem::path& path) {
  table.check(table.size);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "size " << table.size << '\n';
  for (const auto& p : table.landmarks) out << p.row << ' ' << p.col << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

UvIndexTable load_uv_index_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  UvIndexTable table;
  std::string key;
  if (!(in >> key >> table.size) || key != "size") throw ParseError("expected 'size N' header", 1);
  std::size_t line = 1;
  PixelIndex p;
  while (in >> p.row >> p.col) {
    ++line;
    table.landmarks.push_back(p);
  }
  if (!in.eof()) throw ParseError("expected 'row col'", line + 1);
  table.check(table.size);
  return table;
}

}  // namespace uvface
