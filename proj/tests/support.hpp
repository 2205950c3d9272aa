#pragma once

// Shared generators and reference helpers for the test binaries.

#include "uvface/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace uvface::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Flat grid over [0, rows-1] x [0, cols-1] (x = col, y = row, z = 0).
inline Mesh grid_mesh(int rows, int cols) {
  Mesh m;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.vertices.emplace_back(c, r, 0.0);
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      const int a = r * cols + c, b = a + 1, d = a + cols + 1, e = a + cols;
      m.triangles.push_back({a, b, d});
      m.triangles.push_back({a, d, e});
    }
  }
  return m;
}

/// Disk-topology mesh: a jittered grid lifted onto a random height field, with random
/// diagonals. Corner cells always split through the corner vertex so that no
/// triangle has all three vertices on the boundary.
inline Mesh random_disk_mesh(std::mt19937_64& rng, int rows, int cols) {
  Mesh m;
  const double a1 = uniform(rng, -0.5, 0.5), a2 = uniform(rng, -0.5, 0.5), f = uniform(rng, 0.5, 2.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const bool boundary = r == 0 || c == 0 || r == rows - 1 || c == cols - 1;
      const double jx = boundary ? 0.0 : uniform(rng, -0.3, 0.3);
      const double jy = boundary ? 0.0 : uniform(rng, -0.3, 0.3);
      const double x = c + jx, y = r + jy;
      const double z = a1 * std::sin(f * x) * cols + a2 * std::cos(f * y) * rows * 0.5 + uniform(rng, -0.1, 0.1);
      m.vertices.emplace_back(x, y, z);
    }
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      const int a = r * cols + c, b = a + 1, d = a + cols + 1, e = a + cols;
      const bool top_left = r == 0 && c == 0, bottom_right = r == rows - 2 && c == cols - 2;
      const bool top_right = r == 0 && c == cols - 2, bottom_left = r == rows - 2 && c == 0;
      bool main_diag = uniform_int(rng, 0, 1) == 0;
      if (top_left || bottom_right) main_diag = true;
      if (top_right || bottom_left) main_diag = false;
      if (main_diag) {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({a, d, e});
      } else {
        m.triangles.push_back({a, b, e});
        m.triangles.push_back({b, d, e});
      }
    }
  }
  return m;
}

/// Unstructured mesh with random vertices and random (possibly overlapping) triangles.
inline Mesh random_soup(std::mt19937_64& rng, int vertices, int triangles) {
  Mesh m;
  for (int i = 0; i < vertices; ++i) {
    m.vertices.emplace_back(uniform(rng, -100, 100), uniform(rng, -100, 100), uniform(rng, -100, 100));
  }
  for (int t = 0; t < triangles; ++t) {
    m.triangles.push_back({uniform_int(rng, 0, vertices - 1), uniform_int(rng, 0, vertices - 1),
                           uniform_int(rng, 0, vertices - 1)});
  }
  return m;
}

inline double rel_err(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("uvface_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace uvface::testing
