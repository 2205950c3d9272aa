#include "uvface/error.hpp"
#include "uvface/eval.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>

namespace uvface {

// ---------------------------------------------------------------- k-d tree

namespace {
constexpr int kLeafSize = 8;

bool better(double d2, int idx, double best_d2, int best) {
  return d2 < best_d2 || (d2 == best_d2 && idx < best);
}
}  // namespace

KdTree::KdTree(const std::vector<Vec3>& points) : points_(points), index_(points.size()) {
  if (points_.empty()) throw InvalidArgument("k-d tree over an empty point set");
  std::iota(index_.begin(), index_.end(), 0);
  nodes_.reserve(2 * points_.size() / kLeafSize + 1);
  build(0, static_cast<int>(points_.size()), 0);
}

int KdTree::build(int begin, int end, int depth) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end, -1, 0.0, -1, -1});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo = points_[index_[begin]];
  Vec3 hi = lo;
  for (int i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[index_[i]]);
    hi = hi.cwiseMax(points_[index_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] == lo[axis]) return id;  // all points coincide

  const int mid = begin + (end - begin) / 2;
  std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                   [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
  const double split = points_[index_[mid]][axis];
  const int left = build(begin, mid, depth + 1);
  const int right = build(mid, end, depth + 1);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(int node, const Vec3& q, int& best, double& best_d2) const {
  const NodeRec& n = nodes_[node];
  if (n.axis < 0) {
    for (int i = n.begin; i < n.end; ++i) {
      const int idx = index_[i];
      const double d2 = (points_[idx] - q).squaredNorm();
      if (better(d2, idx, best_d2, best)) {
        best_d2 = d2;
        best = idx;
      }
    }
    return;
  }
  const double diff = q[n.axis] - n.split;
  const int near = diff < 0.0 ? n.left : n.right;
  const int far = diff < 0.0 ? n.right : n.left;
  search(near, q, best, best_d2);
  // <= keeps equal-distance candidates with smaller indices reachable.
  if (diff * diff <= best_d2) search(far, q, best, best_d2);
}

int KdTree::nearest(const Vec3& query, double* squared_distance) const {
  int best = std::numeric_limits<int>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  search(0, query, best, best_d2);
  if (squared_distance) *squared_distance = best_d2;
  return best;
}

int nearest_brute_force(const std::vector<Vec3>& points, const Vec3& query, double* squared_distance) {
  if (points.empty()) throw InvalidArgument("nearest neighbor in an empty set");
  int best = 0;
  double best_d2 = (points[0] - query).squaredNorm();
  for (int i = 1; i < static_cast<int>(points.size()); ++i) {
    const double d2 = (points[i] - query).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  if (squared_distance) *squared_distance = best_d2;
  return best;
}

// ---------------------------------------------------------------- rigid fits

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.scale = 1.0 / scale;
  inv.translation = -(inv.scale * (inv.rotation * translation));
  return inv;
}

RigidTransform RigidTransform::then(const RigidTransform& next) const {
  RigidTransform out;
  out.rotation = next.rotation * rotation;
  out.scale = next.scale * scale;
  out.translation = next.scale * (next.rotation * translation) + next.translation;
  return out;
}

namespace {

Vec3 centroid(const std::vector<Vec3>& pts) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

void check_non_degenerate(const std::vector<Vec3>& pts, const char* which) {
  if (pts.size() < 3) throw GeometryError(std::string(which) + " cloud needs at least 3 points");
  const Vec3 c = centroid(pts);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) cov += (p - c) * (p - c).transpose();
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(cov).eigenvalues();
  if (!(ev[2] > 0.0) || ev[1] <= 1e-12 * ev[2]) throw GeometryError(std::string(which) + " cloud is collinear");
}

}  // namespace

RigidTransform fit_rigid(const std::vector<Vec3>& src, const std::vector<Vec3>& dst, bool with_scale) {
  if (src.size() != dst.size() || src.empty()) throw ShapeError("rigid fit needs equal, non-empty point lists");
  const Vec3 cs = centroid(src);
  const Vec3 cd = centroid(dst);
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  double var_src = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    H += (src[i] - cs) * (dst[i] - cd).transpose();
    var_src += (src[i] - cs).squaredNorm();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d U = svd.matrixU();
  const Eigen::Matrix3d V = svd.matrixV();
  Eigen::Vector3d d(1.0, 1.0, (V * U.transpose()).determinant() < 0.0 ? -1.0 : 1.0);

  RigidTransform T;
  T.rotation = V * d.asDiagonal() * U.transpose();
  if (with_scale) {
    if (!(var_src > 0.0)) throw GeometryError("similarity fit of a single repeated point");
    T.scale = svd.singularValues().dot(d) / var_src;
  }
  T.translation = cd - T.scale * (T.rotation * cs);
  return T;
}

// ---------------------------------------------------------------- ICP

namespace {

double match(const KdTree& tree, const std::vector<Vec3>& src, const RigidTransform& T, std::vector<int>& corr) {
  corr.resize(src.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    double d2 = 0.0;
    corr[i] = tree.nearest(T.apply(src[i]), &d2);
    sum += d2;
  }
  return sum / static_cast<double>(src.size());
}

}  // namespace

IcpResult icp(const PointCloud& pred, const PointCloud& gt, const IcpOptions& options) {
  check_non_degenerate(pred.points, "predicted");
  check_non_degenerate(gt.points, "ground-truth");
  if (options.max_iters < 1) throw InvalidArgument("ICP needs at least one iteration");

  const KdTree tree(gt.points);
  IcpResult r;
  if (options.center_first) r.transform.translation = centroid(gt.points) - centroid(pred.points);
  double err = match(tree, pred.points, r.transform, r.correspondence);
  r.errors.push_back(err);
  r.iterations = 1;

  std::vector<Vec3> targets(pred.size());
  std::vector<int> cand_corr;
  while (r.iterations < options.max_iters && err > 0.0) {
    for (std::size_t i = 0; i < pred.size(); ++i) targets[i] = gt.points[r.correspondence[i]];
    const RigidTransform cand = fit_rigid(pred.points, targets, options.with_scale);
    const double cand_err = match(tree, pred.points, cand, cand_corr);
    if (!(cand_err <= err)) break;
    const double improvement = (err - cand_err) / err;
    r.transform = cand;
    r.correspondence.swap(cand_corr);
    err = cand_err;
    r.errors.push_back(err);
    ++r.iterations;
    if (improvement < options.rel_tol) break;
  }
  return r;
}

double recon_error(const PointCloud& pred, const PointCloud& gt, const Vec3& outer_eye_left,
                   const Vec3& outer_eye_right, const ReconOptions& options) {
  const double iod = (outer_eye_left - outer_eye_right).norm();
  if (!(iod > 0.0)) throw InvalidArgument("outer interocular distance must be positive");
  const IcpResult r = icp(pred, gt, options.icp);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d2 = (r.transform.apply(pred.points[i]) - gt.points[r.correspondence[i]]).squaredNorm();
    sum += options.metric == ReconMetric::mean_distance ? std::sqrt(d2) : d2;
  }
  const double mean = sum / static_cast<double>(pred.size());
  return 100.0 * (options.metric == ReconMetric::mean_distance ? mean / iod : mean / (iod * iod));
}

}  // namespace uvface
