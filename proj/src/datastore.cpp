#include "uvface/datastore.hpp"

#include "uvface/error.hpp"
#include "uvface/image.hpp"
#include "uvface/uv_param.hpp"

#include <Eigen/Geometry>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace uvface {

namespace {

namespace fs = std::filesystem;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double draw(std::mt19937_64& rng, const Range& r) { return r.lo + (r.hi - r.lo) * uniform01(rng); }

double mid(const Range& r) { return 0.5 * (r.lo + r.hi); }

double sq(double x) { return x * x; }

double smoothstep(double e0, double e1, double x) {
  const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

/// Lower face contour in (u, w): the jaw line running from temple to temple through the chin.
double jaw_w(double u) {
  const double a = std::abs(u) / 0.8;
  return a >= 1.0 ? 0.05 : 0.05 + 0.65 * std::sqrt(1.0 - a * a);
}

struct FaceShape {
  double rx, ry, rz;
  double nose, mouth, eye, brow;
};

FaceShape neutral_shape(const SyntheticSpec& spec) {
  return {mid(spec.radius_x),       mid(spec.radius_y),        mid(spec.radius_z), mid(spec.nose_amplitude),
          mid(spec.mouth_amplitude), mid(spec.eye_depth), mid(spec.brow_amplitude)};
}

Vec3 surface_point(double u, double w, const FaceShape& f) {
  const double below = smoothstep(jaw_w(u), jaw_w(u) + 0.15, w);
  const double dome = std::sqrt(std::max(0.05, 1.0 - 0.45 * u * u - 0.25 * w * w));
  double bumps = 0.0;
  bumps += f.nose * std::exp(-sq(u / 0.11)) * std::exp(-sq((w - 0.05) / 0.2));
  for (double side : {-1.0, 1.0}) {
    bumps -= f.eye * std::exp(-(sq((u - side * 0.38) / 0.16) + sq((w + 0.2) / 0.09)));
    bumps += f.brow * std::exp(-(sq((u - side * 0.4) / 0.2) + sq((w + 0.42) / 0.06)));
  }
  bumps += f.mouth * std::exp(-(sq(u / 0.3) + sq((w - 0.43) / 0.1)));
  bumps -= 0.6 * f.mouth * std::exp(-(sq(u / 0.3) + sq((w - 0.43) / 0.025)));

  const double x = f.rx * u * (1.0 - 0.25 * below);
  const double y = f.ry * w;
  const double z = f.rz * (dome - 0.15 * below) + bumps * (1.0 - below);
  return {x, y, z};
}

// 68 landmark positions in (u, w). Points with u > 0 are mirror images of points with u < 0.
std::array<Vec2, kNumLandmarks> landmark_params() {
  std::array<Vec2, kNumLandmarks> p{};
  const double pi = std::numbers::pi;
  for (int k = 0; k < 17; ++k) {
    const double phi = pi * k / 16.0;
    p[k] = Vec2(-0.8 * std::cos(phi), jaw_w(0.8 * std::cos(phi)));
  }
  const std::array<Vec2, 5> brow{Vec2(-0.65, -0.40), Vec2(-0.53, -0.45), Vec2(-0.40, -0.47), Vec2(-0.27, -0.46),
                                  Vec2(-0.15, -0.43)};
  for (int k = 0; k < 5; ++k) {
    p[17 + k] = brow[k];
    p[26 - k] = Vec2(-brow[k].x(), brow[k].y());
  }
  for (int k = 0; k < 4; ++k) p[27 + k] = Vec2(0.0, -0.25 + 0.125 * k);
  const std::array<double, 5> nose_u{-0.16, -0.08, 0.0, 0.08, 0.16};
  for (int k = 0; k < 5; ++k) p[31 + k] = Vec2(nose_u[k], 0.2);

  const std::array<Vec2, 6> eye{Vec2(-0.55, -0.20), Vec2(-0.45, -0.26), Vec2(-0.31, -0.26),
                                Vec2(-0.21, -0.20), Vec2(-0.31, -0.14), Vec2(-0.45, -0.14)};
  // Mirror partner of each left-eye point inside the right eye (37..42 <-> 43..48).
  const std::array<int, 6> eye_mirror{3, 2, 1, 0, 5, 4};
  for (int k = 0; k < 6; ++k) {
    p[36 + k] = eye[k];
    p[42 + eye_mirror[k]] = Vec2(-eye[k].x(), eye[k].y());
  }

  const std::array<Vec2, 12> outer{Vec2(-0.32, 0.42), Vec2(-0.20, 0.36), Vec2(-0.08, 0.33), Vec2(0.0, 0.34),
                                   Vec2(0.08, 0.33),  Vec2(0.20, 0.36),  Vec2(0.32, 0.42),  Vec2(0.20, 0.50),
                                   Vec2(0.08, 0.53),  Vec2(0.0, 0.54),   Vec2(-0.08, 0.53), Vec2(-0.20, 0.50)};
  for (int k = 0; k < 12; ++k) p[48 + k] = outer[k];
  const std::array<Vec2, 8> inner{Vec2(-0.26, 0.42), Vec2(-0.10, 0.40), Vec2(0.0, 0.40), Vec2(0.10, 0.40),
                                  Vec2(0.26, 0.42),  Vec2(0.10, 0.46),  Vec2(0.0, 0.46), Vec2(-0.10, 0.46)};
  for (int k = 0; k < 8; ++k) p[60 + k] = inner[k];
  return p;
}

/// Grid column for a horizontal parameter, rounded so that u and -u land on mirrored columns.
int grid_col(double u, int n) {
  const auto r = [n](double v) { return static_cast<int>(std::lround((v + 1.0) * 0.5 * (n - 1))); };
  return u <= 0.0 ? r(u) : n - 1 - r(-u);
}

int grid_row(double w, int n) { return static_cast<int>(std::lround((w + 1.0) * 0.5 * (n - 1))); }

Vec3 albedo(double u, double w, Region region, double tone) {
  const Vec3 skin = tone * Vec3(0.87, 0.68, 0.57);
  if (region == Region::neck) return 0.85 * skin;
  if (sq((std::abs(u) - 0.38) / 0.15) + sq((w + 0.2) / 0.06) <= 1.0) return {0.22, 0.18, 0.16};
  if (sq((std::abs(u) - 0.4) / 0.24) + sq((w + 0.43) / 0.04) <= 1.0) return {0.30, 0.22, 0.15};
  if (sq(u / 0.33) + sq((w - 0.43) / 0.11) <= 1.0) return tone * Vec3(0.72, 0.30, 0.30);
  return skin;
}

/// Z-buffered flat-shaded rendering of a posed mesh with per-vertex albedo.
RgbImage render(const Mesh& posed, const std::vector<Vec3>& vertex_albedo, int size, double background) {
  RgbImage img(size, size);
  for (int r = 0; r < size; ++r) {
    const double g = background + 0.1 * (r + 0.5) / size;
    for (int c = 0; c < size; ++c)
      for (int ch = 0; ch < 3; ++ch) img.at(r, c, ch) = g;
  }
  std::vector<double> zbuf(static_cast<std::size_t>(size) * size, -std::numeric_limits<double>::infinity());
  const Vec3 light = Vec3(-0.3, -0.4, 1.0).normalized();

  for (const Triangle& t : posed.triangles) {
    const Vec3& a = posed.vertices[t[0]];
    const Vec3& b = posed.vertices[t[1]];
    const Vec3& c = posed.vertices[t[2]];
    const double area = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    if (std::abs(area) < 1e-12) continue;
    Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    if (len == 0.0) continue;
    n /= len;
    if (n.z() < 0.0) n = -n;
    const double shade = 0.35 + 0.65 * std::max(0.0, n.dot(light));

    const int c0 = std::max(0, static_cast<int>(std::floor(std::min({a.x(), b.x(), c.x()}) - 0.5)));
    const int c1 = std::min(size - 1, static_cast<int>(std::ceil(std::max({a.x(), b.x(), c.x()}) - 0.5)));
    const int r0 = std::max(0, static_cast<int>(std::floor(std::min({a.y(), b.y(), c.y()}) - 0.5)));
    const int r1 = std::min(size - 1, static_cast<int>(std::ceil(std::max({a.y(), b.y(), c.y()}) - 0.5)));
    for (int r = r0; r <= r1; ++r) {
      const double py = r + 0.5;
      for (int col = c0; col <= c1; ++col) {
        const double px = col + 0.5;
        const double w0 = ((b.x() - px) * (c.y() - py) - (b.y() - py) * (c.x() - px)) / area;
        const double w1 = ((c.x() - px) * (a.y() - py) - (c.y() - py) * (a.x() - px)) / area;
        const double w2 = 1.0 - w0 - w1;
        if (w0 < -1e-12 || w1 < -1e-12 || w2 < -1e-12) continue;
        const double z = w0 * a.z() + w1 * b.z() + w2 * c.z();
        double& zb = zbuf[static_cast<std::size_t>(r) * size + col];
        if (z <= zb) continue;
        zb = z;
        const Vec3 alb = w0 * vertex_albedo[t[0]] + w1 * vertex_albedo[t[1]] + w2 * vertex_albedo[t[2]];
        for (int ch = 0; ch < 3; ++ch) img.at(r, col, ch) = std::clamp(alb[ch] * shade, 0.0, 1.0);
      }
    }
  }
  return img;
}

std::string sample_id(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04zu", i);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void check_range(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    throw InvalidArgument(std::string("invalid range for ") + name);
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void SyntheticSpec::check() const {
  if (count < 1) throw InvalidArgument("count must be at least 1");
  if (resolution < 32 || resolution % 32 != 0) throw InvalidArgument("resolution must be a positive multiple of 32");
  if (grid_size < 5 || grid_size % 2 == 0) throw InvalidArgument("grid_size must be odd and at least 5");
  check_range(radius_x, "radius_x");
  check_range(radius_y, "radius_y");
  check_range(radius_z, "radius_z");
  check_range(nose_amplitude, "nose_amplitude");
  check_range(mouth_amplitude, "mouth_amplitude");
  check_range(eye_depth, "eye_depth");
  check_range(brow_amplitude, "brow_amplitude");
  check_range(yaw_degrees, "yaw_degrees");
  check_range(image_scale, "image_scale");
  if (radius_x.lo <= 0 || radius_y.lo <= 0 || radius_z.lo <= 0) throw InvalidArgument("radii must be positive");
  if (yaw_degrees.lo < -90.0 || yaw_degrees.hi > 90.0) throw InvalidArgument("yaw must lie in [-90, 90]");
  if (image_scale.lo <= 0.0 || image_scale.hi > 1.2) throw InvalidArgument("image_scale must lie in (0, 1.2]");
  if (center_jitter < 0.0 || center_jitter > 0.05) throw InvalidArgument("center_jitter must lie in [0, 0.05]");
}

Region region_at(double u, double w) {
  if (w > jaw_w(u)) return Region::neck;
  if (sq((std::abs(u) - 0.38) / 0.2) + sq((w + 0.2) / 0.1) <= 1.0) return Region::eye_nose_mouth;
  if (std::abs(u) <= 0.18 && w >= -0.25 && w <= 0.25) return Region::eye_nose_mouth;
  if (sq(u / 0.38) + sq((w - 0.43) / 0.14) <= 1.0) return Region::eye_nose_mouth;
  return Region::face;
}

FaceTemplate make_face_template(int grid_size) {
  SyntheticSpec spec;
  spec.grid_size = grid_size;
  if (grid_size < 5 || grid_size % 2 == 0) throw InvalidArgument("grid_size must be odd and at least 5");
  const int n = grid_size;
  const int half = (n - 1) / 2;
  const FaceShape shape = neutral_shape(spec);

  FaceTemplate t;
  t.grid_size = n;
  t.params.reserve(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double u = 2.0 * c / (n - 1) - 1.0;
      const double w = 2.0 * r / (n - 1) - 1.0;
      t.params.emplace_back(u, w);
      t.mesh.vertices.push_back(surface_point(u, w, shape));
      t.regions.push_back(region_at(u, w));
    }
  }
  // Quadrant-dependent diagonals keep the topology mirror symmetric and give every
  // corner cell a diagonal through the corner vertex.
  const auto id = [n](int r, int c) { return r * n + c; };
  for (int r = 0; r + 1 < n; ++r) {
    for (int c = 0; c + 1 < n; ++c) {
      const int a = id(r, c), b = id(r, c + 1), d = id(r + 1, c + 1), e = id(r + 1, c);
      if ((r < half) == (c < half)) {
        t.mesh.triangles.push_back({a, b, d});
        t.mesh.triangles.push_back({a, d, e});
      } else {
        t.mesh.triangles.push_back({a, b, e});
        t.mesh.triangles.push_back({b, d, e});
      }
    }
  }
  for (const Vec2& p : landmark_params()) {
    t.mesh.landmark_indices.push_back(id(grid_row(p.y(), n), grid_col(p.x(), n)));
  }

  TutteOptions opts;
  opts.corner_vertices = std::array<int, 4>{id(0, 0), id(0, n - 1), id(n - 1, n - 1), id(n - 1, 0)};
  t.mesh = tutte_embed_detailed(t.mesh, opts).mesh;
  return t;
}

SyntheticSample generate_sample(const SyntheticSpec& spec, const FaceTemplate& tmpl, int index) {
  spec.check();
  if (tmpl.grid_size != spec.grid_size) throw InvalidArgument("template grid size does not match the generator grid size");
  std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(index)));

  FaceShape shape{};
  shape.rx = draw(rng, spec.radius_x);
  shape.ry = draw(rng, spec.radius_y);
  shape.rz = draw(rng, spec.radius_z);
  shape.nose = draw(rng, spec.nose_amplitude);
  shape.mouth = draw(rng, spec.mouth_amplitude);
  shape.eye = draw(rng, spec.eye_depth);
  shape.brow = draw(rng, spec.brow_amplitude);
  const double yaw = draw(rng, spec.yaw_degrees);
  const double scale = draw(rng, spec.image_scale) * 0.3 * spec.resolution;
  const double jx = (2.0 * uniform01(rng) - 1.0) * spec.center_jitter * spec.resolution;
  const double jy = (2.0 * uniform01(rng) - 1.0) * spec.center_jitter * spec.resolution;
  const double tone = 0.75 + 0.3 * uniform01(rng);
  const double background = 0.05 + 0.25 * uniform01(rng);

  const double theta = yaw * std::numbers::pi / 180.0;
  const double cs = std::cos(theta), sn = std::sin(theta);
  const double half = 0.5 * spec.resolution;

  SyntheticSample out;
  out.posed = tmpl.mesh;
  std::vector<Vec3> alb(tmpl.params.size());
  for (std::size_t i = 0; i < tmpl.params.size(); ++i) {
    const Vec2& p = tmpl.params[i];
    const Vec3 s = surface_point(p.x(), p.y(), shape);
    const double x = cs * s.x() + sn * s.z();
    const double z = -sn * s.x() + cs * s.z();
    out.posed.vertices[i] = Vec3(half + jx + scale * x, half + jy + scale * s.y(), half + scale * z);
    alb[i] = albedo(p.x(), p.y(), tmpl.regions[i], tone);
  }

  Sample& sample = out.sample;
  sample.image = render(out.posed, alb, spec.resolution, background);
  sample.posmap = bake(out.posed, spec.resolution);
  sample.meta.yaw_degrees = yaw;
  std::vector<Vec3> lms;
  for (int idx : out.posed.landmark_indices) lms.push_back(out.posed.vertices[idx]);
  sample.meta.bbox = points_bbox(lms);
  return out;
}

RegionSegmentation template_segmentation(const FaceTemplate& tmpl, int size) {
  const UvRaster raster = rasterize_uv(tmpl.mesh, size);
  std::vector<Vec3> attr;
  attr.reserve(tmpl.params.size());
  for (const Vec2& p : tmpl.params) attr.emplace_back(p.x(), p.y(), 0.0);
  const PositionMap pm = bake_attribute(tmpl.mesh, raster, attr);

  RegionSegmentation seg;
  seg.size = size;
  seg.labels.assign(static_cast<std::size_t>(size) * size, Region::background);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      if (!pm.valid(r, c)) continue;
      const Vec3 p = pm.at(r, c);
      seg.labels[static_cast<std::size_t>(r) * size + c] = region_at(p.x(), p.y());
    }
  }
  stamp_landmarks(seg, make_uv_index_table(tmpl.mesh, size));
  return seg;
}

SyntheticData generate_synthetic_data(const SyntheticSpec& spec) {
  spec.check();
  SyntheticData data;
  data.tmpl = make_face_template(spec.grid_size);
  data.samples.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) data.samples.push_back(generate_sample(spec, data.tmpl, i).sample);
  data.table = make_uv_index_table(data.tmpl.mesh, spec.resolution);
  data.segmentation = template_segmentation(data.tmpl, spec.resolution);
  return data;
}

std::string format_meta_json(const std::string& id, const SampleMeta& meta) {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["yaw"] = meta.yaw_degrees;
  j["bbox"] = {meta.bbox.min.x(), meta.bbox.min.y(), meta.bbox.max.x(), meta.bbox.max.y()};
  return j.dump(2) + "\n";
}

SampleMeta parse_meta_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("metadata: ") + e.what(), 0);
  }
  SampleMeta meta;
  try {
    meta.yaw_degrees = j.at("yaw").get<double>();
    const auto& b = j.at("bbox");
    if (!b.is_array() || b.size() != 4) throw ParseError("metadata: bbox must have 4 numbers", 0);
    meta.bbox.min = Vec2(b[0].get<double>(), b[1].get<double>());
    meta.bbox.max = Vec2(b[2].get<double>(), b[3].get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("metadata: ") + e.what(), 0);
  }
  return meta;
}

SampleMeta load_meta(const fs::path& path) { return parse_meta_json(read_text(path)); }

Dataset write_dataset(const fs::path& root, const std::vector<Sample>& samples, const SyntheticData* shared) {
  if (samples.empty()) throw InvalidArgument("dataset needs at least one sample");
  fs::create_directories(root / "images");
  fs::create_directories(root / "posmaps");
  fs::create_directories(root / "meta");

  Dataset ds;
  ds.root = root;
  ds.resolution = samples.front().posmap.size();
  std::ostringstream index;
  index << "id,image,posmap,meta\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (s.posmap.size() != ds.resolution) throw ShapeError("samples do not share one resolution");
    DatasetEntry e;
    e.id = sample_id(i);
    e.image = fs::path("images") / (e.id + ".png");
    e.posmap = fs::path("posmaps") / (e.id + ".uvpm");
    e.meta = fs::path("meta") / (e.id + ".json");
    save_png(s.image, root / e.image);
    save_uvpm(s.posmap, root / e.posmap);
    write_text(root / e.meta, format_meta_json(e.id, s.meta));
    index << e.id << ',' << e.image.generic_string() << ',' << e.posmap.generic_string() << ','
          << e.meta.generic_string() << '\n';
    ds.entries.push_back(std::move(e));
  }
  write_text(root / "index.csv", index.str());

  if (shared != nullptr) {
    save_mesh(shared->tmpl.mesh, ds.template_path());
    save_landmark_indices(shared->tmpl.mesh.landmark_indices, root / "landmarks.txt");
    save_uv_index_table(shared->table, ds.uv_index_path());
    save_png(segmentation_to_image(shared->segmentation), ds.segmentation_path());
  }
  return ds;
}

Dataset generate_synthetic(const SyntheticSpec& spec, const fs::path& root) {
  const SyntheticData data = generate_synthetic_data(spec);
  return write_dataset(root, data.samples, &data);
}

void copy_shared_files(const Dataset& from, const fs::path& to) {
  fs::create_directories(to);
  for (const char* name : {"template.mesh", "landmarks.txt", "uv_landmarks.txt", "segmentation.png"}) {
    const fs::path src = from.root / name;
    if (fs::exists(src)) fs::copy_file(src, to / name, fs::copy_options::overwrite_existing);
  }
}

Dataset load_dataset(const fs::path& root) {
  const fs::path index_path = root / "index.csv";
  std::istringstream in(read_text(index_path));
  std::string line;
  int line_no = 0;
  Dataset ds;
  ds.root = root;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "id,image,posmap,meta") throw ParseError("index.csv: unexpected header", line_no);
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cols.push_back(cell);
    if (cols.size() != 4) throw ParseError("index.csv: expected 4 columns", line_no);
    ds.entries.push_back({cols[0], cols[1], cols[2], cols[3]});
  }
  if (ds.entries.empty()) throw ParseError("index.csv: no samples", line_no);

  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (const fs::path& p : {ds.image_path(i), ds.posmap_path(i), ds.meta_path(i)}) {
      if (!fs::exists(p)) throw IoError("missing dataset file " + p.string());
    }
    const Sample s = load_sample(ds, i);
    if (i == 0) ds.resolution = s.posmap.size();
    if (s.posmap.size() != ds.resolution) throw ShapeError("samples do not share one resolution");
  }
  return ds;
}

Sample load_sample(const Dataset& dataset, std::size_t i) {
  return ingest_pair(dataset.image_path(i), dataset.posmap_path(i), load_meta(dataset.meta_path(i)));
}

std::vector<Sample> load_samples(const Dataset& dataset) {
  std::vector<Sample> out;
  out.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) out.push_back(load_sample(dataset, i));
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t count,
                                                                             std::pair<double, double> fractions,
                                                                             std::uint64_t seed) {
  const auto [a, b] = fractions;
  if (!(a >= 0.0) || !(b >= 0.0) || std::abs(a + b - 1.0) > 1e-9) {
    throw InvalidArgument("split fractions must be non-negative and sum to 1");
  }
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = count; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  const auto first = static_cast<std::size_t>(std::llround(a * static_cast<double>(count)));
  std::vector<std::size_t> x(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first));
  std::vector<std::size_t> y(order.begin() + static_cast<std::ptrdiff_t>(first), order.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return {std::move(x), std::move(y)};
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, std::pair<double, double> fractions, std::uint64_t seed) {
  const auto [xi, yi] = split_indices(dataset.size(), fractions, seed);
  Dataset x, y;
  x.root = y.root = dataset.root;
  x.resolution = y.resolution = dataset.resolution;
  x.split = "train";
  y.split = "val";
  for (std::size_t i : xi) x.entries.push_back(dataset.entries[i]);
  for (std::size_t i : yi) y.entries.push_back(dataset.entries[i]);
  return {std::move(x), std::move(y)};
}

Sample ingest_pair(const fs::path& image_path, const fs::path& posmap_path, const SampleMeta& meta) {
  Sample s;
  s.posmap = load_uvpm(posmap_path);
  s.image = load_png_rgb(image_path);
  if (s.image.height != s.posmap.size() || s.image.width != s.posmap.size()) {
    throw ShapeError("image is " + std::to_string(s.image.height) + "x" + std::to_string(s.image.width) +
                     " but position map is " + std::to_string(s.posmap.size()) + "x" + std::to_string(s.posmap.size()));
  }
  s.posmap.check_invariants();
  s.meta = meta;
  return s;
}

}  // namespace uvface
