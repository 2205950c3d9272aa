#include "uvface/uv_param.hpp"

#include "uvface/error.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace uvface {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

}  // namespace

BoundaryLoop boundary_loop(const Mesh& mesh) {
  validate(mesh);
  // Count undirected edges; remember the directed orientation of single-use edges.
  std::unordered_map<std::uint64_t, int> count;
  std::unordered_map<std::uint64_t, std::pair<int, int>> directed;
  count.reserve(mesh.triangles.size() * 3);
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      if (a == b) throw GeometryError("triangle with repeated vertex");
      const auto key = edge_key(a, b);
      ++count[key];
      directed[key] = {a, b};
    }
  }

  std::map<int, int> next;  // ordered so the smallest boundary vertex is first
  for (const auto& [key, c] : count) {
    if (c > 2) throw GeometryError("non-manifold edge shared by " + std::to_string(c) + " triangles");
    if (c == 1) {
      const auto [a, b] = directed[key];
      if (!next.emplace(a, b).second) throw GeometryError("non-manifold boundary vertex " + std::to_string(a));
    }
  }
  if (next.empty()) throw GeometryError("mesh is closed: no boundary loop");

  BoundaryLoop loop;
  const int start = next.begin()->first;
  int v = start;
  do {
    loop.vertices.push_back(v);
    auto it = next.find(v);
    if (it == next.end()) throw GeometryError("boundary is not closed at vertex " + std::to_string(v));
    v = it->second;
    if (loop.vertices.size() > next.size()) throw GeometryError("malformed boundary");
  } while (v != start);
  if (loop.vertices.size() != next.size()) {
    throw GeometryError("mesh has multiple boundary loops");
  }

  const std::size_t n = loop.vertices.size();
  loop.arc_length.resize(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    loop.arc_length[i] =
        loop.arc_length[i - 1] + (mesh.vertices[loop.vertices[i]] - mesh.vertices[loop.vertices[i - 1]]).norm();
  }
  loop.total_length = loop.arc_length.back() + (mesh.vertices[loop.vertices.front()] -
                                                mesh.vertices[loop.vertices.back()]).norm();
  return loop;
}

namespace {

std::vector<Vec2> place_on_square(const BoundaryLoop& loop, const std::array<int, 5>& corner) {
  const int n = static_cast<int>(loop.vertices.size());
  static const std::array<Vec2, 5> kCorners{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1), Vec2(0, 0)};
  std::vector<Vec2> uv(n);
  for (int side = 0; side < 4; ++side) {
    const int a = corner[side];
    const int b = corner[side + 1];
    const auto pos = [&](int k) {
      const double s = loop.arc_length[k % n];
      return k >= n ? s + loop.total_length : s;
    };
    const double s0 = pos(a);
    const double len = pos(b) - s0;
    for (int k = a; k < b; ++k) {
      const double t = len > 0.0 ? (pos(k) - s0) / len : 0.0;
      uv[k % n] = (1.0 - t) * kCorners[side] + t * kCorners[side + 1];
    }
    uv[a % n] = kCorners[side];
  }
  return uv;
}

}  // namespace

std::vector<Vec2> map_boundary_to_square(const BoundaryLoop& loop) {
  const int n = static_cast<int>(loop.vertices.size());
  if (n < 4) throw GeometryError("boundary loop needs at least 4 vertices to map to a square");
  if (!(loop.total_length > 0.0)) throw GeometryError("boundary loop has zero length");

  // Corner vertices: nearest to quarter fractions of the arc length, kept strictly increasing.
  std::array<int, 5> corner{0, 0, 0, 0, n};
  for (int q = 1; q < 4; ++q) {
    const double target = loop.total_length * q / 4.0;
    int best = 0;
    double best_d = std::abs(loop.arc_length[0] - target);
    for (int i = 1; i < n; ++i) {
      const double d = std::abs(loop.arc_length[i] - target);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    corner[q] = best;
  }
  for (int q = 1; q < 4; ++q) corner[q] = std::max(corner[q], corner[q - 1] + 1);
  for (int q = 3; q >= 1; --q) corner[q] = std::min(corner[q], corner[q + 1] - 1);
  return place_on_square(loop, corner);
}

std::vector<Vec2> map_boundary_to_square(const BoundaryLoop& loop, const std::array<int, 4>& corner_vertices) {
  const int n = static_cast<int>(loop.vertices.size());
  if (n < 4) throw GeometryError("boundary loop needs at least 4 vertices to map to a square");
  if (!(loop.total_length > 0.0)) throw GeometryError("boundary loop has zero length");
  std::array<int, 4> pos{};
  for (int q = 0; q < 4; ++q) {
    const auto it = std::find(loop.vertices.begin(), loop.vertices.end(), corner_vertices[q]);
    if (it == loop.vertices.end()) {
      throw GeometryError("corner vertex " + std::to_string(corner_vertices[q]) + " is not on the boundary");
    }
    pos[q] = static_cast<int>(it - loop.vertices.begin());
  }
  // Unroll so the positions increase around the loop starting from the first corner.
  std::array<int, 5> corner{pos[0], 0, 0, 0, pos[0] + n};
  for (int q = 1; q < 4; ++q) {
    corner[q] = pos[q] > pos[0] ? pos[q] : pos[q] + n;
    if (corner[q] <= corner[q - 1]) throw GeometryError("corner vertices are not in loop order");
  }
  return place_on_square(loop, corner);
}

Eigen::SparseMatrix<double, Eigen::RowMajor> assemble_laplacian(const Mesh& mesh, LaplacianWeights weights) {
  validate(mesh);
  const int n = mesh.num_vertices();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.triangles.size() * 12);

  auto add_directed = [&](int i, int j, double w) {
    trip.emplace_back(i, j, -w);
    trip.emplace_back(i, i, w);
  };

  // Uniform and cotangent weights accumulate per undirected edge and are clamped after summation.
  std::unordered_map<std::uint64_t, double> edge_w;
  for (const auto& t : mesh.triangles) {
    const Vec3& p0 = mesh.vertices[t[0]];
    const Vec3& p1 = mesh.vertices[t[1]];
    const Vec3& p2 = mesh.vertices[t[2]];
    if (weights != LaplacianWeights::uniform && triangle_area(p0, p1, p2) <= kDegenerateArea) {
      throw GeometryError("degenerate triangle (area <= 1e-12)");
    }
    for (int k = 0; k < 3; ++k) {
      const int i = t[k];
      const int j = t[(k + 1) % 3];
      const int o = t[(k + 2) % 3];
      switch (weights) {
        case LaplacianWeights::uniform:
          edge_w[edge_key(i, j)] = 1.0;
          break;
        case LaplacianWeights::conformal: {
          // Angle at the vertex opposite edge (i, j).
          const Vec3 a = mesh.vertices[i] - mesh.vertices[o];
          const Vec3 b = mesh.vertices[j] - mesh.vertices[o];
          const double cot = a.dot(b) / a.cross(b).norm();
          edge_w[edge_key(i, j)] += 0.5 * cot;
          break;
        }
        case LaplacianWeights::mean_value: {
          // tan(theta/2) for the angle at each endpoint inside this triangle, divided by edge length.
          auto half_tan = [](const Vec3& e1, const Vec3& e2) {
            const double c = e1.dot(e2) / (e1.norm() * e2.norm());
            const double s = e1.cross(e2).norm() / (e1.norm() * e2.norm());
            return (1.0 - c) / s;
          };
          const Vec3& pi = mesh.vertices[i];
          const Vec3& pj = mesh.vertices[j];
          const Vec3& po = mesh.vertices[o];
          const double len = (pj - pi).norm();
          add_directed(i, j, half_tan(pj - pi, po - pi) / len);
          add_directed(j, i, half_tan(pi - pj, po - pj) / len);
          break;
        }
      }
    }
  }
  if (weights != LaplacianWeights::mean_value) {
    for (const auto& [key, w0] : edge_w) {
      const int i = static_cast<int>(key >> 32);
      const int j = static_cast<int>(key & 0xffffffffu);
      const double w = weights == LaplacianWeights::conformal ? std::max(w0, kMinCotangentWeight) : w0;
      add_directed(i, j, w);
      add_directed(j, i, w);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> L(n, n);
  // Sort so duplicate summation order is independent of hash-map iteration order.
  std::sort(trip.begin(), trip.end(), [](const auto& a, const auto& b) {
    if (a.row() != b.row()) return a.row() < b.row();
    if (a.col() != b.col()) return a.col() < b.col();
    return a.value() < b.value();
  });
  L.setFromTriplets(trip.begin(), trip.end());
  L.makeCompressed();
  return L;
}

SparseSystem assemble_tutte_system(const Mesh& mesh, const BoundaryLoop& loop, const std::vector<Vec2>& boundary_uv,
                                   LaplacianWeights weights) {
  const int n = mesh.num_vertices();
  const auto L = assemble_laplacian(mesh, weights);

  std::vector<int> boundary_slot(n, -1);
  for (std::size_t k = 0; k < loop.vertices.size(); ++k) boundary_slot[loop.vertices[k]] = static_cast<int>(k);

  SparseSystem sys;
  std::vector<int> row_of(n, -1);
  for (int v = 0; v < n; ++v) {
    if (boundary_slot[v] < 0) {
      row_of[v] = static_cast<int>(sys.interior.size());
      sys.interior.push_back(v);
    }
  }
  const int m = static_cast<int>(sys.interior.size());
  sys.rhs = Eigen::MatrixX2d::Zero(m, 2);
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < m; ++r) {
    const int v = sys.interior[r];
    bool has_neighbor = false;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(L, v); it; ++it) {
      const int c = static_cast<int>(it.col());
      if (c != v && it.value() != 0.0) has_neighbor = true;
      if (row_of[c] >= 0) {
        trip.emplace_back(r, row_of[c], it.value());
      } else {
        sys.rhs.row(r) -= it.value() * boundary_uv[boundary_slot[c]].transpose();
      }
    }
    if (!has_neighbor) throw GeometryError("vertex " + std::to_string(v) + " is not part of any triangle");
  }
  sys.matrix.resize(m, m);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  return sys;
}

TutteResult tutte_embed_detailed(const Mesh& mesh, const TutteOptions& options) {
  const BoundaryLoop loop = boundary_loop(mesh);
  const std::vector<Vec2> boundary_uv =
      options.corner_vertices ? map_boundary_to_square(loop, *options.corner_vertices) : map_boundary_to_square(loop);
  const SparseSystem sys = assemble_tutte_system(mesh, loop, boundary_uv, options.weights);
  const int m = static_cast<int>(sys.interior.size());

  TutteResult result;
  Eigen::MatrixX2d x = Eigen::MatrixX2d::Zero(m, 2);
  const bool symmetric = options.weights != LaplacianWeights::mean_value;

  if (m > 0) {
    if (mesh.num_vertices() < options.dense_below_vertices) {
      result.dense = true;
      const Eigen::MatrixXd A = Eigen::MatrixXd(sys.matrix);
      if (symmetric) {
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success) throw GeometryError("Laplacian block is not positive definite");
        x = llt.solve(sys.rhs);
      } else {
        x = A.partialPivLu().solve(sys.rhs);
      }
    } else {
      const int max_iter = 10 * m;
      for (int col = 0; col < 2; ++col) {
        Eigen::VectorXd b = sys.rhs.col(col);
        Eigen::VectorXd sol;
        if (symmetric) {
          Eigen::ConjugateGradient<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::Lower | Eigen::Upper,
                                   Eigen::DiagonalPreconditioner<double>>
              cg;
          cg.setTolerance(options.tolerance);
          cg.setMaxIterations(max_iter);
          cg.compute(sys.matrix);
          sol = cg.solve(b);
          result.iterations = std::max(result.iterations, static_cast<int>(cg.iterations()));
        } else {
          Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::DiagonalPreconditioner<double>> bicg;
          bicg.setTolerance(options.tolerance);
          bicg.setMaxIterations(max_iter);
          bicg.compute(sys.matrix);
          sol = bicg.solve(b);
          result.iterations = std::max(result.iterations, static_cast<int>(bicg.iterations()));
        }
        x.col(col) = sol;
      }
    }
    for (int col = 0; col < 2; ++col) {
      const double bnorm = sys.rhs.col(col).lpNorm<Eigen::Infinity>();
      const double rnorm = (sys.matrix * x.col(col) - sys.rhs.col(col)).lpNorm<Eigen::Infinity>();
      const double rel = bnorm > 0.0 ? rnorm / bnorm : rnorm;
      if (!std::isfinite(rel)) throw GeometryError("Tutte solve produced non-finite values");
      result.relative_residual = std::max(result.relative_residual, rel);
    }
    if (result.relative_residual > options.max_relative_residual) {
      throw GeometryError("Tutte solve did not converge: relative residual " +
                          std::to_string(result.relative_residual));
    }
  }

  result.mesh = mesh;
  result.mesh.uv.assign(mesh.vertices.size(), Vec2::Zero());
  for (std::size_t k = 0; k < loop.vertices.size(); ++k) result.mesh.uv[loop.vertices[k]] = boundary_uv[k];
  for (int r = 0; r < m; ++r) {
    // Convex combinations can land a rounding error outside the square.
    result.mesh.uv[sys.interior[r]] = x.row(r).transpose().cwiseMax(0.0).cwiseMin(1.0);
  }
  return result;
}

std::vector<double> uv_signed_areas(const Mesh& mesh) {
  if (!mesh.has_uv()) throw InvalidArgument("mesh has no uv");
  std::vector<double> areas;
  areas.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const Vec2 a = mesh.uv[t[1]] - mesh.uv[t[0]];
    const Vec2 b = mesh.uv[t[2]] - mesh.uv[t[0]];
    areas.push_back(0.5 * (a.x() * b.y() - a.y() * b.x()));
  }
  return areas;
}

}  // namespace uvface
