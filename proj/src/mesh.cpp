#include "uvface/mesh.hpp"

#include "uvface/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

namespace uvface {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

double parse_double(std::string_view tok, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    throw ParseError("invalid number '" + std::string(tok) + "'", line_no);
  }
  return value;
}

long parse_int(std::string_view tok, std::size_t line_no) {
  // Accept `i/j/k` style references by taking the vertex part.
  tok = tok.substr(0, tok.find('/'));
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("invalid index '" + std::string(tok) + "'", line_no);
  }
  return value;
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void validate(const Mesh& mesh) {
  const int n = mesh.num_vertices();
  for (const auto& v : mesh.vertices) {
    if (!v.allFinite()) throw GeometryError("non-finite vertex coordinate");
  }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int idx : mesh.triangles[t]) {
      if (idx < 0 || idx >= n) {
        throw GeometryError("triangle " + std::to_string(t) + " references vertex " +
                            std::to_string(idx) + " out of range [0, " + std::to_string(n) + ")");
      }
    }
  }
  if (mesh.has_uv()) {
    if (mesh.uv.size() != mesh.vertices.size()) {
      throw GeometryError("uv count " + std::to_string(mesh.uv.size()) +
                          " does not match vertex count " + std::to_string(n));
    }
    for (const auto& uv : mesh.uv) {
      if (!(uv.x() >= 0.0 && uv.x() <= 1.0 && uv.y() >= 0.0 && uv.y() <= 1.0)) {
        throw GeometryError("uv coordinate outside [0,1]^2");
      }
    }
  }
  if (mesh.has_landmarks()) {
    if (mesh.landmark_indices.size() != kNumLandmarks) {
      throw GeometryError("landmark table must have 68 entries, got " +
                          std::to_string(mesh.landmark_indices.size()));
    }
    for (int idx : mesh.landmark_indices) {
      if (idx < 0 || idx >= n) throw GeometryError("landmark index out of range");
    }
  }
}

BBox2 points_bbox(const std::vector<Vec3>& points) {
  if (points.empty()) throw InvalidArgument("bounding box of an empty point set");
  BBox2 box;
  box.min = points.front().head<2>();
  box.max = box.min;
  for (const auto& p : points) {
    box.min = box.min.cwiseMin(p.head<2>());
    box.max = box.max.cwiseMax(p.head<2>());
  }
  return box;
}

BBox2 mesh_bbox(const Mesh& mesh) { return points_bbox(mesh.vertices); }

Mesh translated(const Mesh& mesh, const Vec3& offset) {
  Mesh out = mesh;
  for (auto& v : out.vertices) v += offset;
  return out;
}

LandmarkSet mesh_landmarks(const Mesh& mesh) {
  if (mesh.landmark_indices.size() != kNumLandmarks) {
    throw InvalidArgument("mesh has no 68-entry landmark table");
  }
  LandmarkSet set;
  for (int i = 0; i < kNumLandmarks; ++i) {
    set.points[i] = mesh.vertices.at(static_cast<std::size_t>(mesh.landmark_indices[i]));
  }
  return set;
}

Mesh parse_mesh(const std::string& text) {
  Mesh mesh;
  std::vector<std::size_t> face_lines;  // faces may precede vertices; ranges are checked at the end
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "v") {
      if (tok.size() != 4) throw ParseError("vertex record needs 3 coordinates", line_no);
      mesh.vertices.emplace_back(parse_double(tok[1], line_no), parse_double(tok[2], line_no),
                                 parse_double(tok[3], line_no));
    } else if (tok[0] == "vt") {
      if (tok.size() != 3) throw ParseError("uv record needs 2 coordinates", line_no);
      Vec2 uv(parse_double(tok[1], line_no), parse_double(tok[2], line_no));
      if (uv.x() < 0.0 || uv.x() > 1.0 || uv.y() < 0.0 || uv.y() > 1.0) {
        throw ParseError("uv coordinate outside [0,1]", line_no);
      }
      mesh.uv.push_back(uv);
    } else if (tok[0] == "f") {
      if (tok.size() != 4) {
        throw ParseError("face has " + std::to_string(tok.size() - 1) + " vertices; only triangles are supported",
                         line_no);
      }
      Triangle tri{};
      for (int k = 0; k < 3; ++k) {
        long idx = parse_int(tok[k + 1], line_no);
        if (idx < 1) throw ParseError("face index " + std::to_string(idx) + " out of range", line_no);
        tri[k] = static_cast<int>(idx - 1);
      }
      mesh.triangles.push_back(tri);
      face_lines.push_back(line_no);
    } else {
      throw ParseError("unknown record '" + std::string(tok[0]) + "'", line_no);
    }
  }
  const long n = static_cast<long>(mesh.vertices.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int idx : mesh.triangles[t]) {
      if (idx >= n) {
        throw ParseError("face index " + std::to_string(idx + 1) + " out of range (" + std::to_string(n) +
                             " vertices)",
                         face_lines[t]);
      }
    }
  }
  if (!mesh.uv.empty() && mesh.uv.size() != mesh.vertices.size()) {
    throw GeometryError("uv record count " + std::to_string(mesh.uv.size()) + " does not match vertex count " +
                        std::to_string(n));
  }
  return mesh;
}

std::string format_mesh(const Mesh& mesh) {
  validate(mesh);
  std::string out;
  out.reserve(mesh.vertices.size() * 48 + mesh.triangles.size() * 24);
  for (const auto& v : mesh.vertices) {
    out += "v ";
    append_double(out, v.x());
    out += ' ';
    append_double(out, v.y());
    out += ' ';
    append_double(out, v.z());
    out += '\n';
  }
  for (const auto& uv : mesh.uv) {
    out += "vt ";
    append_double(out, uv.x());
    out += ' ';
    append_double(out, uv.y());
    out += '\n';
  }
  for (const auto& t : mesh.triangles) {
    out += "f " + std::to_string(t[0] + 1) + ' ' + std::to_string(t[1] + 1) + ' ' + std::to_string(t[2] + 1) + '\n';
  }
  return out;
}

Mesh load_mesh(const std::filesystem::path& path) { return parse_mesh(read_file(path)); }

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) { write_file(path, format_mesh(mesh)); }

std::vector<int> load_landmark_indices(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<int> indices;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() != 1) throw ParseError("expected one index per line", line_no);
    long idx = parse_int(tok[0], line_no);
    if (idx < 0) throw ParseError("negative landmark index", line_no);
    indices.push_back(static_cast<int>(idx));
  }
  if (indices.size() != kNumLandmarks) {
    throw ParseError("landmark file must contain 68 indices, found " + std::to_string(indices.size()), line_no);
  }
  return indices;
}

void save_landmark_indices(const std::vector<int>& indices, const std::filesystem::path& path) {
  if (indices.size() != kNumLandmarks) throw InvalidArgument("landmark table must have 68 entries");
  std::string out;
  for (int i : indices) out += std::to_string(i) + '\n';
  write_file(path, out);
}

void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  std::string out;
  for (const auto& p : cloud.points) {
    out += "v ";
    append_double(out, p.x());
    out += ' ';
    append_double(out, p.y());
    out += ' ';
    append_double(out, p.z());
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace uvface
