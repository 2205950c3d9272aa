#pragma once

// Coordinate convention used throughout the library: left-handed, origin at the
// upper-left corner of the image, +x to the right, +y downward, +z toward the
// viewer. x and y are in pixels; z uses the same pixel-equivalent scale, so a
// point's orthographic projection onto the image is simply (x, y). Continuous
// pixel coordinates put the center of pixel (row, col) at (col + 0.5, row + 0.5).

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

namespace uvface {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Triangle = std::array<int, 3>;

inline constexpr int kNumLandmarks = 68;
/// 0-based indices of the outer eye corners in the 68-point iBUG ordering (points 37 and 46).
inline constexpr int kOuterEyeLeft = 36;
inline constexpr int kOuterEyeRight = 45;

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::vector<Vec2> uv;  // empty or one entry per vertex
  std::vector<int> landmark_indices;  // empty or exactly 68

  bool has_uv() const { return !uv.empty(); }
  bool has_landmarks() const { return !landmark_indices.empty(); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
};

/// Throws GeometryError naming the first violated invariant.
void validate(const Mesh& mesh);

struct PointCloud {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Exactly 68 points in iBUG order.
struct LandmarkSet {
  std::array<Vec3, kNumLandmarks> points{};
};

struct BBox2 {
  Vec2 min{0.0, 0.0};
  Vec2 max{0.0, 0.0};

  double width() const { return max.x() - min.x(); }
  double height() const { return max.y() - min.y(); }
};

BBox2 mesh_bbox(const Mesh& mesh);
BBox2 points_bbox(const std::vector<Vec3>& points);

Mesh translated(const Mesh& mesh, const Vec3& offset);

/// Landmark positions taken from the mesh vertices listed in landmark_indices.
LandmarkSet mesh_landmarks(const Mesh& mesh);

// Text format: `v x y z`, `vt u v`, `f i j k` (1-based), `#` comments.
// When vt records are present there must be one per vertex.
Mesh load_mesh(const std::filesystem::path& path);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);

Mesh parse_mesh(const std::string& text);
std::string format_mesh(const Mesh& mesh);

// Landmark sidecar: 68 integers (0-based vertex indices), one per line.
std::vector<int> load_landmark_indices(const std::filesystem::path& path);
void save_landmark_indices(const std::vector<int>& indices, const std::filesystem::path& path);

/// Writes points as `v` records only.
void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace uvface
