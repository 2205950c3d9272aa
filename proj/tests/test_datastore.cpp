#include "support.hpp"

#include "uvface/datastore.hpp"
#include "uvface/error.hpp"
#include "uvface/image.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <set>

namespace uvface {
namespace {

using testing::TempDir;

SyntheticSpec small_spec() {
  SyntheticSpec spec;
  spec.count = 4;
  spec.resolution = 64;
  spec.grid_size = 33;
  spec.seed = 11;
  return spec;
}

const FaceTemplate& template33() {
  static const FaceTemplate t = make_face_template(33);
  return t;
}

// Left/right landmark pairs of the 68-point scheme.
std::vector<std::pair<int, int>> mirror_pairs() {
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i < 8; ++i) p.emplace_back(i, 16 - i);
  for (int i = 0; i < 5; ++i) p.emplace_back(17 + i, 26 - i);
  p.insert(p.end(), {{31, 35}, {32, 34}, {36, 45}, {37, 44}, {38, 43}, {39, 42}, {40, 47}, {41, 46},
                     {48, 54}, {49, 53}, {50, 52}, {59, 55}, {58, 56}, {60, 64}, {61, 63}, {67, 65}});
  return p;
}

TEST(Synthetic, SpecValidation) {
  SyntheticSpec s = small_spec();
  EXPECT_NO_THROW(s.check());
  s.resolution = 48;
  EXPECT_THROW(s.check(), InvalidArgument);
  s = small_spec();
  s.count = 0;
  EXPECT_THROW(s.check(), InvalidArgument);
  s = small_spec();
  s.grid_size = 32;
  EXPECT_THROW(s.check(), InvalidArgument);
  s = small_spec();
  s.yaw_degrees = {-95, 10};
  EXPECT_THROW(s.check(), InvalidArgument);
  s = small_spec();
  s.radius_x = {1.0, 0.5};
  EXPECT_THROW(s.check(), InvalidArgument);
}

TEST(Synthetic, DeterministicBySeed) {
  SyntheticSpec spec = small_spec();
  spec.count = 1;
  const SyntheticSample a = generate_sample(spec, template33(), 0);
  const SyntheticSample b = generate_sample(spec, template33(), 0);
  EXPECT_EQ(a.sample.image, b.sample.image);
  EXPECT_EQ(a.sample.posmap, b.sample.posmap);
  EXPECT_EQ(a.sample.meta.yaw_degrees, b.sample.meta.yaw_degrees);
  spec.seed = 12;
  EXPECT_NE(generate_sample(spec, template33(), 0).sample.posmap, a.sample.posmap);
  EXPECT_NE(generate_sample(small_spec(), template33(), 1).sample.posmap, a.sample.posmap);
}

TEST(Synthetic, FrontalFaceIsMirrorSymmetric) {
  SyntheticSpec spec = small_spec();
  spec.yaw_degrees = {0.0, 0.0};
  spec.center_jitter = 0.0;
  spec.resolution = 128;
  const FaceTemplate& t = template33();
  const UvIndexTable table = make_uv_index_table(t.mesh, spec.resolution);
  for (int i = 0; i < 3; ++i) {
    const SyntheticSample s = generate_sample(spec, t, i);
    const LandmarkSet lm = landmarks_from_map(s.sample.posmap, table);
    double cx = 0.0;
    for (int k = 27; k <= 30; ++k) cx += lm.points[k].x() / 4.0;
    for (auto [l, r] : mirror_pairs()) {
      EXPECT_LE(std::abs(lm.points[l].x() + lm.points[r].x() - 2.0 * cx), 1.0) << l << "/" << r;
      EXPECT_LE(std::abs(lm.points[l].y() - lm.points[r].y()), 1.0) << l << "/" << r;
    }
  }
}

TEST(Synthetic, SamplesAreWellFormed) {
  const SyntheticSpec spec = small_spec();
  const FaceTemplate& t = template33();
  const UvIndexTable table = make_uv_index_table(t.mesh, spec.resolution);
  for (int i = 0; i < spec.count; ++i) {
    const SyntheticSample s = generate_sample(spec, t, i);
    EXPECT_GT(s.sample.posmap.valid_count(), 0u);
    EXPECT_NO_THROW(s.sample.posmap.check_invariants());
    const LandmarkSet lm = landmarks_from_map(s.sample.posmap, table);
    for (const Vec3& p : lm.points) EXPECT_TRUE(p.allFinite());
    EXPECT_GE(s.sample.meta.yaw_degrees, spec.yaw_degrees.lo);
    EXPECT_LE(s.sample.meta.yaw_degrees, spec.yaw_degrees.hi);
    EXPECT_GT(s.sample.meta.bbox.width(), 0.0);
    EXPECT_GT(s.sample.meta.bbox.height(), 0.0);
    for (double v : s.sample.image.data) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(Synthetic, PosmapXyLandsOnTheRenderedFace) {
  // Image x,y of each frontal landmark falls on a lit (non-background) pixel.
  SyntheticSpec spec = small_spec();
  spec.yaw_degrees = {-20, 20};
  const FaceTemplate& t = template33();
  const UvIndexTable table = make_uv_index_table(t.mesh, spec.resolution);
  const SyntheticSample s = generate_sample(spec, t, 2);
  const LandmarkSet lm = landmarks_from_map(s.sample.posmap, table);
  const LandmarkSet truth = mesh_landmarks(s.posed);
  const double tol = resample_error(s.posed, spec.resolution).max;
  for (int i = 0; i < kNumLandmarks; ++i) {
    EXPECT_LE((lm.points[i] - truth.points[i]).norm(), tol + 1e-9);
    const int r = static_cast<int>(lm.points[i].y()), c = static_cast<int>(lm.points[i].x());
    ASSERT_TRUE(r >= 0 && r < spec.resolution && c >= 0 && c < spec.resolution);
    double lum = 0.0;
    for (int ch = 0; ch < 3; ++ch) lum += s.sample.image.at(r, c, ch);
    EXPECT_GT(lum, 0.0) << i;
  }
}

TEST(Synthetic, TemplateSegmentationHasEveryRegion) {
  const RegionSegmentation seg = template_segmentation(template33(), 64);
  std::set<Region> seen(seg.labels.begin(), seg.labels.end());
  for (Region r : {Region::landmark, Region::eye_nose_mouth, Region::face, Region::neck}) EXPECT_TRUE(seen.count(r));
  EXPECT_NO_THROW(check_landmark_labels(seg, make_uv_index_table(template33().mesh, 64)));
  EXPECT_EQ(region_at(0.0, -0.9), Region::face);
  EXPECT_EQ(region_at(0.0, 0.95), Region::neck);
}

TEST(Split, SizesDisjointAndDeterministic) {
  const auto [a, b] = split_indices(10, {0.8, 0.2}, 3);
  EXPECT_EQ(a.size(), 8u);
  EXPECT_EQ(b.size(), 2u);
  std::set<std::size_t> all(a.begin(), a.end());
  for (std::size_t i : b) EXPECT_TRUE(all.insert(i).second);
  EXPECT_EQ(all.size(), 10u);
  EXPECT_EQ(*all.rbegin(), 9u);
  const auto again = split_indices(10, {0.8, 0.2}, 3);
  EXPECT_EQ(again.first, a);
  EXPECT_EQ(again.second, b);
  bool differs = false;
  for (std::uint64_t seed = 4; seed < 20 && !differs; ++seed) differs = split_indices(10, {0.8, 0.2}, seed).second != b;
  EXPECT_TRUE(differs);
  EXPECT_THROW(split_indices(10, {0.7, 0.2}, 3), InvalidArgument);
  EXPECT_THROW(split_indices(10, {1.2, -0.2}, 3), InvalidArgument);
}

TEST(Meta, JsonRoundTrip) {
  SampleMeta m;
  m.yaw_degrees = -33.25;
  m.bbox.min = Vec2(10.5, 12);
  m.bbox.max = Vec2(100, 120.75);
  const SampleMeta back = parse_meta_json(format_meta_json("0007", m));
  EXPECT_EQ(back.yaw_degrees, m.yaw_degrees);
  EXPECT_EQ(back.bbox.min, m.bbox.min);
  EXPECT_EQ(back.bbox.max, m.bbox.max);
  EXPECT_THROW(parse_meta_json("{\"yaw\": 1}"), Error);
  EXPECT_THROW(parse_meta_json("not json"), Error);
}

TEST(Dataset, WriteLoadAndSplit) {
  TempDir dir("dataset");
  const SyntheticSpec spec = small_spec();
  const Dataset ds = generate_synthetic(spec, dir.path());
  ASSERT_EQ(ds.size(), 4u);
  for (const char* f : {"index.csv", "template.mesh", "uv_landmarks.txt", "segmentation.png", "images/0000.png",
                        "posmaps/0003.uvpm", "meta/0001.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }

  const Dataset loaded = load_dataset(dir.path());
  EXPECT_EQ(loaded.size(), 4u);
  EXPECT_EQ(loaded.resolution, 64);
  const SyntheticData mem = generate_synthetic_data(spec);
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    const Sample s = load_sample(loaded, i);
    const Sample& m = mem.samples[i];
    EXPECT_EQ(s.meta.yaw_degrees, m.meta.yaw_degrees);
    for (std::size_t k = 0; k < s.image.data.size(); ++k) ASSERT_NEAR(s.image.data[k], m.image.data[k], 0.5 / 255 + 1e-12);
    for (int r = 0; r < 64; ++r)
      for (int c = 0; c < 64; ++c) {
        ASSERT_EQ(s.posmap.valid(r, c), m.posmap.valid(r, c));
        ASSERT_LT((s.posmap.at(r, c) - m.posmap.at(r, c)).norm(), 1e-4);
      }
  }

  const auto [train, val] = split(loaded, {0.75, 0.25}, 5);
  EXPECT_EQ(train.split, "train");
  EXPECT_EQ(val.split, "val");
  EXPECT_EQ(train.size() + val.size(), 4u);
  EXPECT_EQ(val.size(), 1u);
}

TEST(Dataset, MissingOrBrokenFiles) {
  TempDir dir("broken");
  generate_synthetic(small_spec(), dir.path());
  std::filesystem::remove(dir / "posmaps/0002.uvpm");
  EXPECT_THROW(load_dataset(dir.path()), Error);

  TempDir bad("badindex");
  std::ofstream(bad / "index.csv") << "id,image\n";
  EXPECT_THROW(load_dataset(bad.path()), ParseError);
}

TEST(Ingest, PairsAndErrors) {
  TempDir dir("ingest");
  SyntheticSpec spec = small_spec();
  const SyntheticSample s = generate_sample(spec, template33(), 0);
  save_png(s.sample.image, dir / "img.png");
  save_uvpm(s.sample.posmap, dir / "pm.uvpm");
  const Sample ok = ingest_pair(dir / "img.png", dir / "pm.uvpm", s.sample.meta);
  EXPECT_EQ(ok.posmap.size(), 64);
  EXPECT_EQ(ok.meta.yaw_degrees, s.sample.meta.yaw_degrees);

  save_uvpm(PositionMap(32), dir / "small.uvpm");
  EXPECT_THROW(ingest_pair(dir / "img.png", dir / "small.uvpm", {}), ShapeError);

  auto bytes = encode_uvpm(s.sample.posmap);
  bytes.resize(bytes.size() / 2);
  std::ofstream(dir / "cut.uvpm", std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                                          static_cast<std::streamsize>(bytes.size()));
  try {
    ingest_pair(dir / "img.png", dir / "cut.uvpm", {});
    FAIL() << "truncated file accepted";
  } catch (const CorruptFileError& e) {
    EXPECT_GT(e.offset(), 0u);
    EXPECT_LE(e.offset(), bytes.size());
  }
}

TEST(DeriveSeed, DistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
  EXPECT_NE(derive_seed(42, 7), derive_seed(43, 7));
}

}  // namespace
}  // namespace uvface
