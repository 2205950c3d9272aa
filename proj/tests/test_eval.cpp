#include "support.hpp"

#include "uvface/error.hpp"
#include "uvface/eval.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <Eigen/Geometry>

#include <fstream>
#include <numbers>
#include <sstream>

namespace uvface {
namespace {

using testing::TempDir;
using testing::uniform;

BBox2 box(double x0, double y0, double x1, double y1) {
  BBox2 b;
  b.min = Vec2(x0, y0);
  b.max = Vec2(x1, y1);
  return b;
}

LandmarkSet random_landmarks(std::mt19937_64& rng) {
  LandmarkSet s;
  for (Vec3& p : s.points) p = Vec3(uniform(rng, 0, 200), uniform(rng, 0, 200), uniform(rng, -50, 50));
  return s;
}

std::vector<Vec3> random_points(std::mt19937_64& rng, int n, const Vec3& extent) {
  std::vector<Vec3> pts(n);
  for (Vec3& p : pts) p = Vec3(uniform(rng, 0, extent.x()), uniform(rng, 0, extent.y()), uniform(rng, 0, extent.z()));
  return pts;
}

Eigen::Matrix3d rot_z(double degrees) {
  return Eigen::AngleAxisd(degrees * std::numbers::pi / 180.0, Vec3::UnitZ()).toRotationMatrix();
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  const Vec3 axis = Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)).normalized();
  return Eigen::AngleAxisd(uniform(rng, -std::numbers::pi, std::numbers::pi), axis).toRotationMatrix();
}

// ---------------------------------------------------------------- NME

TEST(Nme, IdenticalIsZero) {
  std::mt19937_64 rng(1);
  const LandmarkSet a = random_landmarks(rng);
  EXPECT_EQ(nme_landmarks(a, a, box(0, 0, 100, 100), Dims::xy), 0.0);
  EXPECT_EQ(nme_landmarks(a, a, box(0, 0, 100, 100), Dims::xyz), 0.0);
}

TEST(Nme, SingleOffsetPoint) {
  std::mt19937_64 rng(2);
  const LandmarkSet gt = random_landmarks(rng);
  LandmarkSet pred = gt;
  const double d = 6.5;
  pred.points[17] += Vec3(0.6 * d, 0.8 * d, 0.0);
  EXPECT_NEAR(nme_landmarks(pred, gt, box(10, 20, 110, 120), Dims::xy), 100.0 * d / (68.0 * 100.0), 1e-13);
  pred.points[17] = gt.points[17] + Vec3(0, 0, d);
  EXPECT_EQ(nme_landmarks(pred, gt, box(10, 20, 110, 120), Dims::xy), 0.0);
  EXPECT_NEAR(nme_landmarks(pred, gt, box(10, 20, 110, 120), Dims::xyz), 100.0 * d / (68.0 * 100.0), 1e-13);
}

TEST(Nme, MatchesNaiveOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const LandmarkSet a = random_landmarks(rng), b = random_landmarks(rng);
    const BBox2 bb = box(uniform(rng, 0, 50), uniform(rng, 0, 50), uniform(rng, 60, 250), uniform(rng, 60, 250));
    for (Dims dims : {Dims::xy, Dims::xyz}) {
      double sum = 0.0;
      for (int i = 0; i < kNumLandmarks; ++i) {
        double sq = 0.0;
        for (int k = 0; k < (dims == Dims::xy ? 2 : 3); ++k) sq += std::pow(a.points[i][k] - b.points[i][k], 2);
        sum += std::sqrt(sq);
      }
      const double w = bb.max.x() - bb.min.x(), h = bb.max.y() - bb.min.y();
      const double expected = 100.0 * sum / kNumLandmarks / std::sqrt(w * h);
      EXPECT_LE(testing::rel_err(nme_landmarks(a, b, bb, dims), expected, 1e-300), 1e-12);
      EXPECT_LE(testing::rel_err(nme_landmarks(a, b, bb, dims, BBoxNorm::max_side),
                                 100.0 * sum / kNumLandmarks / std::max(w, h), 1e-300),
                1e-12);
    }
  }
}

TEST(Nme, ScaleInvariant) {
  std::mt19937_64 rng(4);
  const LandmarkSet a = random_landmarks(rng), b = random_landmarks(rng);
  LandmarkSet a2 = a, b2 = b;
  for (auto& p : a2.points) p *= 3.7;
  for (auto& p : b2.points) p *= 3.7;
  const BBox2 bb = box(5, 7, 90, 130);
  const BBox2 bb2 = box(5 * 3.7, 7 * 3.7, 90 * 3.7, 130 * 3.7);
  EXPECT_LE(testing::rel_err(nme_landmarks(a, b, bb, Dims::xyz), nme_landmarks(a2, b2, bb2, Dims::xyz), 1e-300), 1e-12);
}

TEST(Nme, Errors) {
  LandmarkSet a;
  EXPECT_THROW(nme_landmarks(a, a, box(0, 0, 0, 10), Dims::xy), InvalidArgument);
  EXPECT_THROW(nme_landmarks(a, a, box(0, 0, 10, -1), Dims::xy), InvalidArgument);
  PointCloud p, q;
  p.points.resize(5);
  q.points.resize(4);
  EXPECT_THROW(nme_dense(p, q, box(0, 0, 1, 1), Dims::xy), ShapeError);
}

TEST(NmeDense, MirrorsLandmarkCases) {
  std::mt19937_64 rng(5);
  PointCloud gt;
  gt.points = random_points(rng, 500, Vec3(100, 100, 30));
  EXPECT_EQ(nme_dense(gt, gt, box(0, 0, 100, 100), Dims::xyz), 0.0);

  PointCloud pred = gt;
  pred.points[42] += Vec3(3, 4, 0);
  EXPECT_NEAR(nme_dense(pred, gt, box(0, 0, 100, 100), Dims::xy), 100.0 * 5.0 / (500.0 * 100.0), 1e-13);

  pred.points = random_points(rng, 500, Vec3(100, 100, 30));
  double sum = 0.0;
  for (int i = 0; i < 500; ++i) sum += (pred.points[i] - gt.points[i]).norm();
  const double expected = 100.0 * sum / 500.0 / std::sqrt(80.0 * 120.0);
  EXPECT_LE(testing::rel_err(nme_dense(pred, gt, box(0, 0, 80, 120), Dims::xyz), expected, 1e-300), 1e-12);
}

// ---------------------------------------------------------------- CED

void expect_ced_invariants(const CedCurve& c) {
  ASSERT_EQ(c.thresholds.size(), static_cast<std::size_t>(kCedPoints));
  ASSERT_EQ(c.fractions.size(), static_cast<std::size_t>(kCedPoints));
  for (int i = 0; i < kCedPoints; ++i) {
    ASSERT_GE(c.fractions[i], 0.0);
    ASSERT_LE(c.fractions[i], 1.0);
    if (i > 0) ASSERT_GE(c.fractions[i], c.fractions[i - 1]);
  }
  EXPECT_EQ(c.fraction_below(c.sorted_errors.back()), 1.0);
  EXPECT_GE(c.auc, 0.0);
  EXPECT_LE(c.auc, 1.0);
}

TEST(Ced, AllZeroErrors) {
  const CedCurve c = ced(std::vector<double>(10, 0.0), 5.0);
  for (double f : c.fractions) EXPECT_EQ(f, 1.0);
  EXPECT_NEAR(c.auc, 1.0, 1e-15);
  EXPECT_EQ(c.mean, 0.0);
  expect_ced_invariants(c);
}

TEST(Ced, TwoPointHandComputation) {
  const CedCurve c = ced({3.0, 1.0}, 4.0);
  EXPECT_EQ(c.sorted_errors, (std::vector<double>{1.0, 3.0}));
  EXPECT_EQ(c.mean, 2.0);
  for (int i = 0; i < kCedPoints; ++i) {
    const double t = c.thresholds[i];
    const double expected = t < 1.0 ? 0.0 : (t < 3.0 ? 0.5 : 1.0);
    ASSERT_EQ(c.fractions[i], expected) << t;
  }
  EXPECT_EQ(c.thresholds.front(), 0.0);
  EXPECT_EQ(c.thresholds.back(), 4.0);
  // The exact area of the step function is (0.5 * 2 + 1 * 1) / 4 = 0.5; the
  // trapezoid rule blurs each step over one grid interval.
  EXPECT_NEAR(c.auc, 0.5, 1.0 / (kCedPoints - 1));
}

TEST(Ced, RandomMatchesBruteForce) {
  std::mt19937_64 rng(6);
  std::vector<double> errors(1000);
  for (double& e : errors) e = std::abs(uniform(rng, -1, 1)) * uniform(rng, 0, 12);
  const double cutoff = 8.0;
  const CedCurve c = ced(errors, cutoff);
  std::vector<double> frac(kCedPoints);
  for (int i = 0; i < kCedPoints; ++i) {
    const double t = cutoff * i / (kCedPoints - 1);
    int below = 0;
    for (double e : errors) below += e <= t;
    frac[i] = static_cast<double>(below) / errors.size();
    ASSERT_EQ(c.thresholds[i], t);
    ASSERT_EQ(c.fractions[i], frac[i]);
  }
  double area = 0.0;
  for (int i = 0; i + 1 < kCedPoints; ++i) area += (frac[i] + frac[i + 1]) / 2 * (cutoff / (kCedPoints - 1));
  EXPECT_NEAR(c.auc, area / cutoff, 1e-12);
  double sum = 0.0;
  for (double e : errors) sum += e;
  EXPECT_NEAR(c.mean, sum / errors.size(), 1e-12);
  expect_ced_invariants(c);
}

TEST(Ced, InvariantsOnRandomInputs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> errors(testing::uniform_int(rng, 1, 40));
    for (double& e : errors) e = uniform(rng, 0, 20);
    expect_ced_invariants(ced(errors, uniform(rng, 0.5, 25)));
  }
}

TEST(Ced, Errors) {
  EXPECT_THROW(ced({}, 1.0), InvalidArgument);
  EXPECT_THROW(ced({1.0}, 0.0), InvalidArgument);
  EXPECT_THROW(ced({-1.0}, 1.0), InvalidArgument);
}

// ---------------------------------------------------------------- k-d tree

TEST(KdTree, MatchesBruteForce) {
  std::mt19937_64 rng(8);
  for (int n : {1, 2, 7, 64, 500, 2000}) {
    const std::vector<Vec3> pts = random_points(rng, n, Vec3(10, 5, 2));
    const KdTree tree(pts);
    for (int q = 0; q < 300; ++q) {
      const Vec3 query(uniform(rng, -2, 12), uniform(rng, -2, 7), uniform(rng, -1, 3));
      double d_tree = 0.0, d_brute = 0.0;
      ASSERT_EQ(tree.nearest(query, &d_tree), nearest_brute_force(pts, query, &d_brute));
      ASSERT_EQ(d_tree, d_brute);
    }
  }
}

TEST(KdTree, DuplicatePointsTieToLowerIndex) {
  std::vector<Vec3> pts(50, Vec3(1, 1, 1));
  pts.push_back(Vec3(5, 5, 5));
  const KdTree tree(pts);
  EXPECT_EQ(tree.nearest(Vec3(1.1, 1, 1)), 0);
  EXPECT_EQ(tree.nearest(Vec3(5, 5, 4)), 50);
  EXPECT_THROW(KdTree(std::vector<Vec3>{}), InvalidArgument);
}

// ---------------------------------------------------------------- ICP

TEST(RigidTransform, InverseAndComposition) {
  std::mt19937_64 rng(9);
  RigidTransform a{random_rotation(rng), Vec3(1, 2, 3), 1.5};
  RigidTransform b{random_rotation(rng), Vec3(-4, 0, 2), 1.0};
  const Vec3 p(0.3, -2, 7);
  EXPECT_LT((a.inverse().apply(a.apply(p)) - p).norm(), 1e-12);
  EXPECT_LT((a.then(b).apply(p) - b.apply(a.apply(p))).norm(), 1e-12);
}

TEST(FitRigid, RecoversRotationAndScale) {
  std::mt19937_64 rng(10);
  const std::vector<Vec3> src = random_points(rng, 40, Vec3(3, 2, 1));
  const Eigen::Matrix3d r = random_rotation(rng);
  std::vector<Vec3> dst;
  for (const Vec3& p : src) dst.push_back(2.0 * (r * p) + Vec3(1, -1, 4));
  const RigidTransform sim = fit_rigid(src, dst, true);
  EXPECT_LT((sim.rotation - r).norm(), 1e-10);
  EXPECT_NEAR(sim.scale, 2.0, 1e-10);
  const RigidTransform rigid = fit_rigid(src, dst, false);
  EXPECT_EQ(rigid.scale, 1.0);
  EXPECT_NEAR(rigid.rotation.determinant(), 1.0, 1e-9);
  EXPECT_LT((rigid.rotation.transpose() * rigid.rotation - Eigen::Matrix3d::Identity()).norm(), 1e-9);
}

TEST(FitRigid, ReflectionIsNeverReturned) {
  // Points mirrored through a plane: the best orthogonal map is a reflection, which must be excluded.
  std::mt19937_64 rng(11);
  const std::vector<Vec3> src = random_points(rng, 30, Vec3(1, 1, 1));
  std::vector<Vec3> dst;
  for (const Vec3& p : src) dst.push_back(Vec3(-p.x(), p.y(), p.z()));
  EXPECT_NEAR(fit_rigid(src, dst).rotation.determinant(), 1.0, 1e-9);
}

TEST(Icp, IdenticalCloudsConvergeImmediately) {
  std::mt19937_64 rng(12);
  PointCloud c;
  c.points = random_points(rng, 200, Vec3(4, 3, 1));
  const IcpResult r = icp(c, c);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.errors.front(), 0.0);
  EXPECT_LT((r.transform.rotation - Eigen::Matrix3d::Identity()).norm(), 1e-15);
  EXPECT_LT(r.transform.translation.norm(), 1e-12);
}

TEST(Icp, RecoversKnownRigidMotion) {
  std::mt19937_64 rng(13);
  PointCloud gt;
  gt.points = random_points(rng, 800, Vec3(10, 4, 1.5));
  const Eigen::Matrix3d r = rot_z(20.0);
  const Vec3 t(5, 2, 1);
  PointCloud pred;
  for (const Vec3& p : gt.points) pred.points.push_back(r * p + t);
  const IcpResult res = icp(pred, gt);
  // The fitted map is the inverse of (r, t).
  EXPECT_LT((res.transform.rotation - r.transpose()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((res.transform.translation + r.transpose() * t).cwiseAbs().maxCoeff(), 1e-6);
  for (std::size_t i = 0; i < pred.size(); ++i) ASSERT_EQ(res.correspondence[i], static_cast<int>(i));
}

TEST(Icp, ErrorSequenceNeverIncreases) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    PointCloud gt, pred;
    gt.points = random_points(rng, testing::uniform_int(rng, 20, 300), Vec3(5, 3, 2));
    const Eigen::Matrix3d r = Eigen::AngleAxisd(uniform(rng, -0.6, 0.6), Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), 1).normalized())
                                  .toRotationMatrix();
    const Vec3 t(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2));
    for (const Vec3& p : gt.points) {
      pred.points.push_back(r * p + t + 0.05 * Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)));
    }
    const IcpResult res = icp(pred, gt);
    ASSERT_EQ(res.errors.size(), static_cast<std::size_t>(res.iterations));
    for (std::size_t k = 1; k < res.errors.size(); ++k) ASSERT_LE(res.errors[k], res.errors[k - 1]) << trial;
    EXPECT_NEAR(res.transform.rotation.determinant(), 1.0, 1e-9);
  }
}

TEST(Icp, DegenerateClouds) {
  PointCloud line, ok;
  for (int i = 0; i < 10; ++i) line.points.emplace_back(i, 2 * i, 0);
  ok.points = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  EXPECT_THROW(icp(line, ok), GeometryError);
  EXPECT_THROW(icp(ok, line), GeometryError);
  PointCloud two;
  two.points = {Vec3(0, 0, 0), Vec3(1, 0, 0)};
  EXPECT_THROW(icp(two, ok), GeometryError);
}

// ---------------------------------------------------------------- reconstruction error

struct ReconCase {
  PointCloud gt;
  Vec3 eye_l{0, 0, 0}, eye_r{0, 0, 0};
};

ReconCase recon_case(std::mt19937_64& rng) {
  ReconCase c;
  c.gt.points = random_points(rng, 1500, Vec3(12, 14, 4));
  c.eye_l = Vec3(3, 5, 3);
  c.eye_r = Vec3(9, 5, 3);
  return c;
}

TEST(ReconError, IdenticalIsZero) {
  std::mt19937_64 rng(15);
  const ReconCase c = recon_case(rng);
  EXPECT_EQ(recon_error(c.gt, c.gt, c.eye_l, c.eye_r), 0.0);
}

TEST(ReconError, RigidShiftIsRemoved) {
  std::mt19937_64 rng(16);
  const ReconCase c = recon_case(rng);
  const Eigen::Matrix3d r = rot_z(8.0) * Eigen::AngleAxisd(0.1, Vec3::UnitX()).toRotationMatrix();
  PointCloud pred;
  for (const Vec3& p : c.gt.points) pred.points.push_back(r * p + Vec3(0.7, -0.4, 0.2));
  EXPECT_LE(recon_error(pred, c.gt, c.eye_l, c.eye_r), 1e-6);

  // Moving gt and its eye corners together leaves the error unchanged.
  PointCloud moved;
  for (const Vec3& p : c.gt.points) moved.points.push_back(r * p + Vec3(1, 2, 3));
  EXPECT_LE(recon_error(pred, moved, r * c.eye_l + Vec3(1, 2, 3), r * c.eye_r + Vec3(1, 2, 3)), 1e-6);
}

TEST(ReconError, NoiseMatchesBruteForceNearestNeighbor) {
  std::mt19937_64 rng(17);
  const ReconCase c = recon_case(rng);
  std::normal_distribution<double> noise(0.0, 0.15);
  PointCloud pred;
  for (const Vec3& p : c.gt.points) pred.points.push_back(p + Vec3(noise(rng), noise(rng), noise(rng)));
  double sum = 0.0;
  for (const Vec3& p : pred.points) {
    double best = 1e300;
    for (const Vec3& q : c.gt.points) best = std::min(best, (p - q).squaredNorm());
    sum += std::sqrt(best);
  }
  const double expected = 100.0 * sum / pred.size() / (c.eye_l - c.eye_r).norm();
  const double got = recon_error(pred, c.gt, c.eye_l, c.eye_r);
  EXPECT_LE(std::abs(got - expected), 0.2 * expected);

  ReconOptions sq;
  sq.metric = ReconMetric::mean_squared_distance;
  EXPECT_GT(recon_error(pred, c.gt, c.eye_l, c.eye_r, sq), 0.0);
}

TEST(ReconError, DegenerateEyes) {
  std::mt19937_64 rng(18);
  const ReconCase c = recon_case(rng);
  EXPECT_THROW(recon_error(c.gt, c.gt, c.eye_l, c.eye_l), InvalidArgument);
}

// ---------------------------------------------------------------- yaw buckets and reports

TEST(YawBuckets, Examples) {
  const EvalReport one = bucket_by_yaw({{"a", 10, 1.0}, {"b", -10, 3.0}});
  EXPECT_EQ(one.bucket_counts, (std::array<int, 3>{2, 0, 0}));
  EXPECT_EQ(one.bucket_means[0], 2.0);
  EXPECT_FALSE(one.bucket_means[1].has_value());
  EXPECT_FALSE(one.bucket_means[2].has_value());

  const EvalReport three = bucket_by_yaw({{"a", 10, 1.0}, {"b", 45, 2.0}, {"c", 80, 3.0}});
  EXPECT_EQ(three.bucket_means[0], 1.0);
  EXPECT_EQ(three.bucket_means[1], 2.0);
  EXPECT_EQ(three.bucket_means[2], 3.0);
  EXPECT_EQ(three.mean, 2.0);

  EXPECT_EQ(yaw_bucket(29.999), 0);
  EXPECT_EQ(yaw_bucket(-30.0), 1);
  EXPECT_EQ(yaw_bucket(60.0), 2);
  EXPECT_EQ(yaw_bucket(90.0), 2);
  EXPECT_THROW(yaw_bucket(90.5), InvalidArgument);
  EXPECT_THROW(bucket_by_yaw({}), InvalidArgument);
}

TEST(YawBuckets, RandomMatchesNaiveGrouping) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SampleError> samples(testing::uniform_int(rng, 1, 60));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      samples[i] = {std::to_string(i), uniform(rng, -90, 90), uniform(rng, 0, 15)};
    }
    std::array<std::vector<double>, 3> groups;
    for (const auto& s : samples) {
      const double a = std::abs(s.yaw_degrees);
      groups[a < 30 ? 0 : (a < 60 ? 1 : 2)].push_back(s.error);
    }
    const EvalReport r = bucket_by_yaw(samples);
    double total = 0.0;
    for (int b = 0; b < 3; ++b) {
      ASSERT_EQ(r.bucket_counts[b], static_cast<int>(groups[b].size()));
      if (groups[b].empty()) {
        ASSERT_FALSE(r.bucket_means[b].has_value());
        continue;
      }
      double s = 0.0;
      for (double e : groups[b]) s += e;
      total += s;
      ASSERT_NEAR(*r.bucket_means[b], s / groups[b].size(), 1e-12);
    }
    ASSERT_NEAR(r.mean, total / samples.size(), 1e-12);
  }
}

TEST(Reports, CsvRoundTripAndJson) {
  TempDir dir("report");
  EvalReport r = bucket_by_yaw({{"0000", 12.5, 1.25}, {"0001", -47.0, 2.5}});
  r.curve = ced({1.25, 2.5}, 5.0);
  write_report_csv(r, dir / "r.csv");
  const auto back = read_report_csv(dir / "r.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].id, "0001");
  EXPECT_EQ(back[1].yaw_degrees, -47.0);
  EXPECT_EQ(back[1].error, 2.5);

  write_report_json(r, "landmarks", dir / "r.json");
  std::ifstream in(dir / "r.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["mode"], "landmarks");
  EXPECT_EQ(j["count"], 2);
  EXPECT_DOUBLE_EQ(j["mean"].get<double>(), 1.875);
  EXPECT_EQ(j["buckets"]["0-30"]["count"], 1);
  EXPECT_TRUE(j["buckets"]["60-90"]["mean"].is_null());
  EXPECT_DOUBLE_EQ(j["cutoff"].get<double>(), 5.0);

  write_ced_csv(*r.curve, dir / "c.csv");
  std::ifstream cin(dir / "c.csv");
  std::string line;
  int lines = 0;
  std::getline(cin, line);
  EXPECT_EQ(line, "threshold,fraction");
  while (std::getline(cin, line)) ++lines;
  EXPECT_EQ(lines, kCedPoints);

  std::ofstream(dir / "bad.csv") << "id,yaw,error\nx,1\n";
  EXPECT_THROW(read_report_csv(dir / "bad.csv"), ParseError);
}

TEST(Reports, SvgHasOnePolylinePerSeriesAndEscapesLabels) {
  const std::string svg = ced_svg({{"ratio 16:4:3:0", ced({1, 2, 3}, 5)}, {"a<b & c", ced({2, 4}, 5)}});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t count = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 2u);
  EXPECT_NE(svg.find("a&lt;b &amp; c"), std::string::npos);
  EXPECT_EQ(svg.find("a<b"), std::string::npos);
  EXPECT_THROW(ced_svg({}), InvalidArgument);
}

}  // namespace
}  // namespace uvface
