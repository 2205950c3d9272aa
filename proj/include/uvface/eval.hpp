#pragma once

#include "uvface/mesh.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace uvface {

// ---------------------------------------------------------------- NME

enum class Dims { xy, xyz };
enum class BBoxNorm { geometric_mean, max_side };

/// sqrt(w * h) by default, or max(w, h).
double bbox_normalizer(const BBox2& bbox, BBoxNorm norm = BBoxNorm::geometric_mean);

/// Mean point distance over the 68 landmarks divided by the bbox normalizer, in percent.
double nme_landmarks(const LandmarkSet& pred, const LandmarkSet& gt, const BBox2& bbox, Dims dims,
                     BBoxNorm norm = BBoxNorm::geometric_mean);

/// Same as nme_landmarks over index-corresponding dense point sets.
double nme_dense(const PointCloud& pred, const PointCloud& gt, const BBox2& bbox, Dims dims,
                 BBoxNorm norm = BBoxNorm::geometric_mean);

// ---------------------------------------------------------------- CED

inline constexpr int kCedPoints = 1000;

struct CedCurve {
  std::vector<double> sorted_errors;
  std::vector<double> thresholds;  // kCedPoints values evenly spaced over [0, cutoff]
  std::vector<double> fractions;   // fraction of errors <= threshold
  double mean = 0.0;
  double auc = 0.0;                // trapezoid integral of fractions over [0, cutoff], divided by cutoff
  double cutoff = 0.0;

  /// Empirical CDF at an arbitrary threshold.
  double fraction_below(double threshold) const;
};

CedCurve ced(const std::vector<double>& errors, double cutoff);

// ---------------------------------------------------------------- k-d tree

/// Static 3D k-d tree for exact nearest-neighbor queries.
class KdTree {
 public:
  explicit KdTree(const std::vector<Vec3>& points);

  /// Index of the nearest point; ties go to the smaller index.
  int nearest(const Vec3& query, double* squared_distance = nullptr) const;
  std::size_t size() const { return points_.size(); }

 private:
  struct NodeRec {
    int begin;
    int end;
    int axis;  // -1 for a leaf
    double split;
    int left;
    int right;
  };
  int build(int begin, int end, int depth);
  void search(int node, const Vec3& q, int& best, double& best_d2) const;

  std::vector<Vec3> points_;
  std::vector<int> index_;
  std::vector<NodeRec> nodes_;
};

/// Brute-force counterpart of KdTree::nearest (same tie rule).
int nearest_brute_force(const std::vector<Vec3>& points, const Vec3& query, double* squared_distance = nullptr);

// ---------------------------------------------------------------- ICP

/// x -> scale * R x + t. R is orthonormal with det +1; scale is 1 for rigid fits.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const { return scale * (rotation * p) + translation; }
  RigidTransform inverse() const;
  RigidTransform then(const RigidTransform& next) const;  // next ∘ this
};

/// Closed-form least-squares fit mapping src[i] onto dst[i] (SVD Procrustes).
RigidTransform fit_rigid(const std::vector<Vec3>& src, const std::vector<Vec3>& dst, bool with_scale = false);

struct IcpOptions {
  int max_iters = 100;
  double rel_tol = 1e-6;
  bool with_scale = false;
  bool center_first = true;  // start from the centroid-aligning translation
};

struct IcpResult {
  RigidTransform transform;         // maps pred onto gt
  std::vector<int> correspondence;  // for each pred point, index of its nearest gt point
  std::vector<double> errors;       // mean squared correspondence distance, one entry per iteration
  int iterations = 0;
};

/// Alternates nearest-neighbor matching and Procrustes fitting. A fitted step is
/// kept only if it lowers the matched error, so `errors` never increases.
IcpResult icp(const PointCloud& pred, const PointCloud& gt, const IcpOptions& options = {});

enum class ReconMetric { mean_distance, mean_squared_distance };

struct ReconOptions {
  IcpOptions icp;
  ReconMetric metric = ReconMetric::mean_distance;
};

/// ICP-align pred to gt, then the mean correspondence distance divided by the
/// outer interocular distance, in percent. The squared variant divides the mean
/// squared distance by the squared interocular distance.
double recon_error(const PointCloud& pred, const PointCloud& gt, const Vec3& outer_eye_left,
                   const Vec3& outer_eye_right, const ReconOptions& options = {});

// ---------------------------------------------------------------- reports

struct SampleError {
  std::string id;
  double yaw_degrees = 0.0;
  double error = 0.0;  // percent
};

struct EvalReport {
  std::vector<SampleError> samples;
  double mean = 0.0;
  std::array<std::optional<double>, 3> bucket_means;  // |yaw| in [0,30), [30,60), [60,90]
  std::array<int, 3> bucket_counts{0, 0, 0};
  std::optional<CedCurve> curve;
};

/// Bucket index for |yaw|; throws when |yaw| > 90.
int yaw_bucket(double yaw_degrees);

EvalReport bucket_by_yaw(const std::vector<SampleError>& samples);

inline const std::array<const char*, 3> kYawBucketNames{"0-30", "30-60", "60-90"};

// Per-sample CSV: `id,yaw,error`. Aggregate JSON: mode, count, mean, auc, cutoff,
// buckets {"0-30": {count, mean}, ...} with null means for empty buckets.
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);
void write_report_json(const EvalReport& report, const std::string& mode, const std::filesystem::path& path);
std::vector<SampleError> read_report_csv(const std::filesystem::path& path);
/// CED CSV: `threshold,fraction`.
void write_ced_csv(const CedCurve& curve, const std::filesystem::path& path);

struct CedSeries {
  std::string label;
  CedCurve curve;
};

/// Polyline chart of one or more CED curves with axes and a legend showing mean NME.
std::string ced_svg(const std::vector<CedSeries>& series, const std::string& x_label = "NME (%)");

}  // namespace uvface
