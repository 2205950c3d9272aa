#pragma once

#include "uvface/mask_loss.hpp"
#include "uvface/mesh.hpp"
#include "uvface/posmap.hpp"
#include "uvface/sample.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace uvface {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Parameters of the synthetic face generator. Surface coordinates are in
/// head units before posing: the face spans roughly [-rx, rx] x [-ry, ry].
struct SyntheticSpec {
  int count = 200;
  int resolution = 256;
  int grid_size = 65;  // template vertices per side; must be odd

  Range radius_x{0.85, 1.0};
  Range radius_y{1.05, 1.25};
  Range radius_z{0.55, 0.75};
  Range nose_amplitude{0.18, 0.32};
  Range mouth_amplitude{0.04, 0.10};
  Range eye_depth{0.05, 0.10};
  Range brow_amplitude{0.02, 0.06};

  Range yaw_degrees{-60.0, 60.0};
  Range image_scale{0.92, 1.08};  // multiplies the base face size of 0.3 * resolution
  double center_jitter = 0.04;    // fraction of resolution, uniform in [-j, j] per axis

  std::uint64_t seed = 0;

  void check() const;
};

/// Shared topology and uv layout of every synthetic face.
struct FaceTemplate {
  int grid_size = 0;
  Mesh mesh;                    // neutral shape in head units, with uv and landmarks
  std::vector<Vec2> params;     // (u, w) in [-1, 1]^2 per vertex
  std::vector<Region> regions;  // per-vertex region (never background or landmark)
};

FaceTemplate make_face_template(int grid_size);

/// Region of a surface point given its (u, w) parameters.
Region region_at(double u, double w);

struct SyntheticSample {
  Sample sample;
  Mesh posed;  // template topology with vertices in image coordinates
};

/// One sample; `index` selects the derived per-sample seed.
SyntheticSample generate_sample(const SyntheticSpec& spec, const FaceTemplate& tmpl, int index);

/// UV-space segmentation of the template at map size `size`, landmarks stamped.
RegionSegmentation template_segmentation(const FaceTemplate& tmpl, int size);

/// One row of index.csv. Paths are relative to the dataset root.
struct DatasetEntry {
  std::string id;
  std::filesystem::path image;
  std::filesystem::path posmap;
  std::filesystem::path meta;
};

struct Dataset {
  std::filesystem::path root;
  std::vector<DatasetEntry> entries;
  std::string split = "all";
  int resolution = 0;

  std::size_t size() const { return entries.size(); }
  std::filesystem::path image_path(std::size_t i) const { return root / entries[i].image; }
  std::filesystem::path posmap_path(std::size_t i) const { return root / entries[i].posmap; }
  std::filesystem::path meta_path(std::size_t i) const { return root / entries[i].meta; }
  std::filesystem::path template_path() const { return root / "template.mesh"; }
  std::filesystem::path segmentation_path() const { return root / "segmentation.png"; }
  std::filesystem::path uv_index_path() const { return root / "uv_landmarks.txt"; }
};

/// In-memory result of the generator.
struct SyntheticData {
  FaceTemplate tmpl;
  std::vector<Sample> samples;
  RegionSegmentation segmentation;
  UvIndexTable table;
};

SyntheticData generate_synthetic_data(const SyntheticSpec& spec);

/// Generates and writes a dataset directory:
///   images/NNNN.png  posmaps/NNNN.uvpm  meta/NNNN.json  index.csv
///   template.mesh  landmarks.txt  uv_landmarks.txt  segmentation.png
Dataset generate_synthetic(const SyntheticSpec& spec, const std::filesystem::path& root);

/// Writes samples (and optional shared files) in the dataset layout.
Dataset write_dataset(const std::filesystem::path& root, const std::vector<Sample>& samples,
                      const SyntheticData* shared = nullptr);

/// Copies template.mesh, landmarks.txt, uv_landmarks.txt and segmentation.png when present.
void copy_shared_files(const Dataset& from, const std::filesystem::path& to);

/// Reads index.csv and checks that every referenced file exists and parses.
Dataset load_dataset(const std::filesystem::path& root);

std::string format_meta_json(const std::string& id, const SampleMeta& meta);
SampleMeta parse_meta_json(const std::string& text);
SampleMeta load_meta(const std::filesystem::path& path);

Sample load_sample(const Dataset& dataset, std::size_t i);
std::vector<Sample> load_samples(const Dataset& dataset);

/// Seeded disjoint split; the first fraction goes to `first`.
std::pair<Dataset, Dataset> split(const Dataset& dataset, std::pair<double, double> fractions, std::uint64_t seed);
/// Index form of split, shared with in-memory callers.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t count,
                                                                             std::pair<double, double> fractions,
                                                                             std::uint64_t seed);

/// Loads an externally produced image/posmap pair. Throws ShapeError on a
/// resolution mismatch and CorruptFileError for a damaged UVPM file.
Sample ingest_pair(const std::filesystem::path& image_path, const std::filesystem::path& posmap_path,
                   const SampleMeta& meta);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace uvface
