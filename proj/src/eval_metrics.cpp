#include "uvface/error.hpp"
#include "uvface/eval.hpp"

#include <algorithm>
#include <cmath>

namespace uvface {

double bbox_normalizer(const BBox2& bbox, BBoxNorm norm) {
  const double w = bbox.width();
  const double h = bbox.height();
  if (!(w > 0.0) || !(h > 0.0)) throw InvalidArgument("degenerate bounding box (zero area)");
  return norm == BBoxNorm::geometric_mean ? std::sqrt(w * h) : std::max(w, h);
}

namespace {

double point_distance(const Vec3& a, const Vec3& b, Dims dims) {
  return dims == Dims::xy ? (a.head<2>() - b.head<2>()).norm() : (a - b).norm();
}

}  // namespace

double nme_landmarks(const LandmarkSet& pred, const LandmarkSet& gt, const BBox2& bbox, Dims dims, BBoxNorm norm) {
  const double d = bbox_normalizer(bbox, norm);
  double sum = 0.0;
  for (int i = 0; i < kNumLandmarks; ++i) sum += point_distance(pred.points[i], gt.points[i], dims);
  return 100.0 * (sum / kNumLandmarks) / d;
}

double nme_dense(const PointCloud& pred, const PointCloud& gt, const BBox2& bbox, Dims dims, BBoxNorm norm) {
  if (pred.size() != gt.size()) {
    throw ShapeError("dense NME needs equal point counts, got " + std::to_string(pred.size()) + " and " +
                     std::to_string(gt.size()));
  }
  if (gt.empty()) throw InvalidArgument("dense NME of empty point sets");
  const double d = bbox_normalizer(bbox, norm);
  double sum = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) sum += point_distance(pred.points[i], gt.points[i], dims);
  return 100.0 * (sum / static_cast<double>(gt.size())) / d;
}

double CedCurve::fraction_below(double threshold) const {
  const auto it = std::upper_bound(sorted_errors.begin(), sorted_errors.end(), threshold);
  return static_cast<double>(it - sorted_errors.begin()) / static_cast<double>(sorted_errors.size());
}

CedCurve ced(const std::vector<double>& errors, double cutoff) {
  if (errors.empty()) throw InvalidArgument("CED of an empty error list");
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw InvalidArgument("CED cutoff must be positive");
  for (double e : errors) {
    if (!std::isfinite(e) || e < 0.0) throw InvalidArgument("CED errors must be finite and non-negative");
  }
  CedCurve c;
  c.cutoff = cutoff;
  c.sorted_errors = errors;
  std::sort(c.sorted_errors.begin(), c.sorted_errors.end());
  double sum = 0.0;
  for (double e : errors) sum += e;
  c.mean = sum / static_cast<double>(errors.size());

  c.thresholds.resize(kCedPoints);
  c.fractions.resize(kCedPoints);
  for (int i = 0; i < kCedPoints; ++i) {
    c.thresholds[i] = cutoff * static_cast<double>(i) / (kCedPoints - 1);
    c.fractions[i] = c.fraction_below(c.thresholds[i]);
  }
  double area = 0.0;
  for (int i = 0; i + 1 < kCedPoints; ++i) {
    area += 0.5 * (c.fractions[i] + c.fractions[i + 1]) * (c.thresholds[i + 1] - c.thresholds[i]);
  }
  c.auc = area / cutoff;
  return c;
}

int yaw_bucket(double yaw_degrees) {
  const double a = std::abs(yaw_degrees);
  if (!std::isfinite(a) || a > 90.0) throw InvalidArgument("yaw " + std::to_string(yaw_degrees) + " outside [-90, 90]");
  if (a < 30.0) return 0;
  if (a < 60.0) return 1;
  return 2;
}

EvalReport bucket_by_yaw(const std::vector<SampleError>& samples) {
  if (samples.empty()) throw InvalidArgument("no samples to report");
  EvalReport r;
  r.samples = samples;
  std::array<double, 3> sums{0.0, 0.0, 0.0};
  double total = 0.0;
  for (const auto& s : samples) {
    const int b = yaw_bucket(s.yaw_degrees);
    sums[b] += s.error;
    ++r.bucket_counts[b];
    total += s.error;
  }
  r.mean = total / static_cast<double>(samples.size());
  for (int b = 0; b < 3; ++b) {
    if (r.bucket_counts[b] > 0) r.bucket_means[b] = sums[b] / r.bucket_counts[b];
  }
  return r;
}

}  // namespace uvface
