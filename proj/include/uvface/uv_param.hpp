#pragma once

#include "uvface/mesh.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <optional>
#include <vector>

namespace uvface {

/// Ordered boundary of a disk-topology mesh. The loop follows the winding of the
/// triangles that own the boundary edges, so the interior is always on the left.
struct BoundaryLoop {
  std::vector<int> vertices;
  std::vector<double> arc_length;  // cumulative 3D length from vertices[0]; arc_length[0] == 0
  double total_length = 0.0;       // includes the closing edge back to vertices[0]
};

/// Starts at the boundary vertex with the smallest index.
BoundaryLoop boundary_loop(const Mesh& mesh);

/// Places the loop on the perimeter of the unit square by arc length. The vertices
/// closest to 0, 1/4, 1/2 and 3/4 of the total length are pinned to (0,0), (1,0),
/// (1,1) and (0,1) in that order.
std::vector<Vec2> map_boundary_to_square(const BoundaryLoop& loop);

/// Same, with the four corners pinned to the given mesh vertices, which must lie
/// on the loop in loop order starting from any of them. The first one goes to (0,0).
std::vector<Vec2> map_boundary_to_square(const BoundaryLoop& loop, const std::array<int, 4>& corner_vertices);

enum class LaplacianWeights { conformal, uniform, mean_value };

/// Cotangent weights are clamped from below to this value.
inline constexpr double kMinCotangentWeight = 1e-6;
/// Triangles with 3D area at or below this are rejected under conformal and mean-value weights.
inline constexpr double kDegenerateArea = 1e-12;

/// Full n-by-n Laplacian (L_ii = sum of w_ij, L_ij = -w_ij). Symmetric for
/// conformal and uniform weights; mean-value weights are not symmetric.
Eigen::SparseMatrix<double, Eigen::RowMajor> assemble_laplacian(const Mesh& mesh, LaplacianWeights weights);

/// Interior block of the Tutte system with the boundary moved to the right-hand side.
struct SparseSystem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;  // interior x interior
  Eigen::MatrixX2d rhs;                                 // interior x 2
  std::vector<int> interior;                            // mesh vertex index per row
};

SparseSystem assemble_tutte_system(const Mesh& mesh, const BoundaryLoop& loop, const std::vector<Vec2>& boundary_uv,
                                   LaplacianWeights weights);

struct TutteOptions {
  LaplacianWeights weights = LaplacianWeights::conformal;
  double tolerance = 1e-10;
  int dense_below_vertices = 2000;
  double max_relative_residual = 1e-8;
  std::optional<std::array<int, 4>> corner_vertices;  // mesh vertex ids; arc-length quarters when empty
};

struct TutteResult {
  Mesh mesh;                       // copy of the input with uv filled
  double relative_residual = 0.0;  // max over both columns of |Ax-b|_inf / |b|_inf
  int iterations = 0;              // 0 for the dense path
  bool dense = false;
};

TutteResult tutte_embed_detailed(const Mesh& mesh, const TutteOptions& options = {});

inline Mesh tutte_embed(const Mesh& mesh, LaplacianWeights weights = LaplacianWeights::conformal) {
  TutteOptions opts;
  opts.weights = weights;
  return tutte_embed_detailed(mesh, opts).mesh;
}

/// Signed area of each triangle in uv space.
std::vector<double> uv_signed_areas(const Mesh& mesh);

}  // namespace uvface
