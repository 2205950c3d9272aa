// uvface: command-line front end for the position-map toolkit.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error. Failures print one
// line to stderr of the form `uvface: error[<kind>]: <message>`.

#include "uvface/augment.hpp"
#include "uvface/datastore.hpp"
#include "uvface/error.hpp"
#include "uvface/eval.hpp"
#include "uvface/image.hpp"
#include "uvface/mask_loss.hpp"
#include "uvface/nn/prn.hpp"
#include "uvface/nn/train.hpp"
#include "uvface/posmap.hpp"
#include "uvface/uv_param.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <tuple>

namespace fs = std::filesystem;
using namespace uvface;

namespace {

// ---------------------------------------------------------------- option structs

struct ParamOpts {
  fs::path input, output;
  std::string weights = "conformal";
};

struct BakeOpts {
  fs::path input, output;
  int size = kDefaultMapSize;
};

struct UnbakeOpts {
  fs::path input, output, topology;
};

struct MaskOpts {
  fs::path segmentation, output;
  std::string ratio = "16:4:3:0";
};

struct GenOpts {
  fs::path output, spec_file;
  std::optional<int> count, resolution, grid;
  std::optional<double> yaw_max;
  std::optional<std::uint64_t> seed;
};

struct AugmentOpts {
  fs::path input, output;
  int copies = 1;
  std::uint64_t seed = 0;
  double occlusion = 0.0;
};

struct TrainOpts {
  fs::path data, output, loss_csv;
  int base = 16;
  int bottleneck = 512;
  std::string ratio = "16:4:3:0";
  int epochs = 1;
  long max_steps = 0;
  int batch = 16;
  double lr = 1e-4;
  int halving = 5;
  std::uint64_t seed = 0;
  bool augment = false;
  AugmentRanges ranges;
  std::pair<double, double> scale_range{ranges.min_scale, ranges.max_scale};
  double val_fraction = 0.0;
};

struct PredictOpts {
  fs::path checkpoint, data, output;
};

struct EvalOpts {
  fs::path pred, gt, output;
  std::string mode = "landmarks";
  std::string dims = "xy";
  std::string norm = "geometric_mean";
  double cutoff = 10.0;
  bool with_scale = false;
  bool squared = false;
};

struct CedPlotOpts {
  std::vector<fs::path> reports;
  std::vector<std::string> labels;
  fs::path output;
  double cutoff = 10.0;
};

// ---------------------------------------------------------------- helpers

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

fs::path with_suffix(fs::path p, const std::string& ext) { return p.replace_extension(ext); }

LaplacianWeights parse_weights(const std::string& s) {
  if (s == "conformal") return LaplacianWeights::conformal;
  if (s == "uniform") return LaplacianWeights::uniform;
  return LaplacianWeights::mean_value;
}

SyntheticSpec read_spec_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  SyntheticSpec s;
  const auto range = [&](const char* key, Range& r) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2) throw InvalidArgument(std::string("spec field ") + key + " must be [lo, hi]");
    r = {v[0].get<double>(), v[1].get<double>()};
  };
  try {
    s.count = j.value("count", s.count);
    s.resolution = j.value("resolution", s.resolution);
    s.grid_size = j.value("grid_size", s.grid_size);
    s.seed = j.value("seed", s.seed);
    s.center_jitter = j.value("center_jitter", s.center_jitter);
    range("radius_x", s.radius_x);
    range("radius_y", s.radius_y);
    range("radius_z", s.radius_z);
    range("nose_amplitude", s.nose_amplitude);
    range("mouth_amplitude", s.mouth_amplitude);
    range("eye_depth", s.eye_depth);
    range("brow_amplitude", s.brow_amplitude);
    range("yaw_degrees", s.yaw_degrees);
    range("image_scale", s.image_scale);
  } catch (const nlohmann::json::type_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  return s;
}

RegionSegmentation load_segmentation(const Dataset& ds) {
  if (!fs::exists(ds.segmentation_path())) {
    throw IoError("dataset " + ds.root.string() + " has no segmentation.png");
  }
  return segmentation_from_image(load_png_gray(ds.segmentation_path()));
}

// Pixels that count as face surface for dense metrics: every gt-valid pixel,
// restricted to the weighted regions when a segmentation is available.
std::vector<std::size_t> dense_pixels(const PositionMap& gt, const RegionSegmentation* seg) {
  std::vector<std::size_t> out;
  const int n = gt.size();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (!gt.valid(r, c)) continue;
      if (seg != nullptr) {
        const Region reg = seg->labels[static_cast<std::size_t>(r) * n + c];
        if (reg == Region::background || reg == Region::neck) continue;
      }
      out.push_back(static_cast<std::size_t>(r) * n + c);
    }
  }
  return out;
}

PointCloud gather(const PositionMap& map, const std::vector<std::size_t>& pixels) {
  PointCloud pc;
  pc.points.reserve(pixels.size());
  const int n = map.size();
  for (std::size_t p : pixels) pc.points.push_back(map.at(static_cast<int>(p / n), static_cast<int>(p % n)));
  return pc;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// ---------------------------------------------------------------- commands

int run_param(const ParamOpts& o) {
  TutteOptions opts;
  opts.weights = parse_weights(o.weights);
  const TutteResult r = tutte_embed_detailed(load_mesh(o.input), opts);
  save_mesh(r.mesh, o.output);
  std::cout << "param: " << r.mesh.num_vertices() << " vertices, residual " << r.relative_residual << "\n";
  return 0;
}

int run_bake(const BakeOpts& o) {
  const Mesh mesh = load_mesh(o.input);
  const PositionMap pm = bake(mesh, o.size);
  save_uvpm(pm, o.output);
  std::cout << "bake: " << pm.valid_count() << " valid pixels of " << o.size * o.size << "\n";
  return 0;
}

int run_unbake(const UnbakeOpts& o) {
  const PositionMap pm = load_uvpm(o.input);
  if (!o.topology.empty()) {
    save_mesh(unbake_mesh(pm, load_mesh(o.topology)), o.output);
  } else {
    save_point_cloud(unbake(pm), o.output);
  }
  return 0;
}

int run_mask(const MaskOpts& o) {
  const WeightMask mask = build_mask(segmentation_from_image(load_png_gray(o.segmentation)), WeightRatio::parse(o.ratio));
  save_png(mask_to_image(mask), o.output);
  return 0;
}

int run_gen(const GenOpts& o) {
  SyntheticSpec spec = o.spec_file.empty() ? SyntheticSpec{} : read_spec_file(o.spec_file);
  if (o.count) spec.count = *o.count;
  if (o.resolution) spec.resolution = *o.resolution;
  if (o.grid) spec.grid_size = *o.grid;
  if (o.yaw_max) spec.yaw_degrees = {-*o.yaw_max, *o.yaw_max};
  if (o.seed) spec.seed = *o.seed;
  spec.check();
  const Dataset ds = generate_synthetic(spec, o.output);
  std::cout << "gen: " << ds.size() << " samples at " << ds.resolution << " in " << o.output.string() << "\n";
  return 0;
}

int run_augment(const AugmentOpts& o) {
  const Dataset in = load_dataset(o.input);
  const std::vector<Sample> samples = load_samples(in);
  AugmentRanges ranges;
  ranges.occlusion_probability = o.occlusion;
  std::vector<Sample> out;
  out.reserve(samples.size() * static_cast<std::size_t>(o.copies));
  for (int k = 0; k < o.copies; ++k) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const std::uint64_t s = derive_seed(o.seed, static_cast<std::uint64_t>(k) * samples.size() + i);
      out.push_back(apply(samples[i], sample_params(s, in.resolution, ranges)));
    }
  }
  write_dataset(o.output, out);
  copy_shared_files(in, o.output);
  std::cout << "augment: wrote " << out.size() << " samples\n";
  return 0;
}

int run_train(const TrainOpts& o) {
  const Dataset ds = load_dataset(o.data);
  std::vector<Sample> all = load_samples(ds);
  const WeightMask mask = build_mask(load_segmentation(ds), WeightRatio::parse(o.ratio));

  std::vector<Sample> train_set, val_set;
  if (o.val_fraction > 0.0) {
    const auto [ti, vi] = split_indices(all.size(), {1.0 - o.val_fraction, o.val_fraction}, o.seed);
    for (std::size_t i : ti) train_set.push_back(all[i]);
    for (std::size_t i : vi) val_set.push_back(all[i]);
  } else {
    train_set = std::move(all);
  }

  nn::PrnArchitecture arch;
  arch.input_size = ds.resolution;
  arch.base_channels = o.base;
  arch.bottleneck_channels = o.bottleneck;
  nn::PrnModel model(arch, o.seed);

  nn::TrainConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.halving_period = o.halving;
  cfg.batch_size = o.batch;
  cfg.epochs = o.epochs;
  cfg.max_steps = o.max_steps;
  cfg.seed = o.seed;
  cfg.loss.ratio = WeightRatio::parse(o.ratio);
  if (o.augment) {
    AugmentRanges ranges = o.ranges;
    std::tie(ranges.min_scale, ranges.max_scale) = o.scale_range;
    cfg.augment = ranges;
  }

  std::ostringstream curve;
  curve << "step,epoch,learning_rate,loss\n";
  const nn::TrainResult r = nn::train(model, train_set, mask, cfg, [&](const nn::StepRecord& s) {
    curve << s.step << ',' << s.epoch << ',' << format_double(s.learning_rate) << ',' << format_double(s.loss) << '\n';
  });
  nn::save_checkpoint(model, o.output);
  write_file(o.loss_csv.empty() ? with_suffix(o.output, ".loss.csv") : o.loss_csv, curve.str());

  std::cout << "train: " << r.curve.size() << " steps";
  if (!r.curve.empty()) std::cout << ", first loss " << r.curve.front().loss << ", last loss " << r.curve.back().loss;
  if (!val_set.empty()) std::cout << ", val loss " << nn::evaluate_loss(model, val_set, mask, cfg.loss);
  std::cout << "\n";
  return 0;
}

int run_predict(const PredictOpts& o) {
  const nn::PrnModel model = nn::load_checkpoint(o.checkpoint);
  const Dataset ds = load_dataset(o.data);
  if (ds.resolution != model.arch().input_size) {
    throw ShapeError("model input is " + std::to_string(model.arch().input_size) + " but dataset resolution is " +
                     std::to_string(ds.resolution));
  }
  std::vector<Sample> samples = load_samples(ds);
  const std::size_t chunk = 16;
  for (std::size_t start = 0; start < samples.size(); start += chunk) {
    std::vector<const RgbImage*> images;
    const std::size_t end = std::min(samples.size(), start + chunk);
    for (std::size_t i = start; i < end; ++i) images.push_back(&samples[i].image);
    std::vector<PositionMap> maps = nn::predict(model, images);
    for (std::size_t i = start; i < end; ++i) samples[i].posmap = std::move(maps[i - start]);
  }
  write_dataset(o.output, samples);
  copy_shared_files(ds, o.output);
  std::cout << "predict: " << samples.size() << " position maps\n";
  return 0;
}

int run_eval(const EvalOpts& o) {
  const Dataset gt = load_dataset(o.gt);
  const Dataset pred = load_dataset(o.pred);
  if (gt.resolution != pred.resolution) throw ShapeError("prediction and ground truth resolutions differ");

  std::map<std::string, std::size_t> pred_index;
  for (std::size_t i = 0; i < pred.size(); ++i) pred_index[pred.entries[i].id] = i;

  const UvIndexTable table = load_uv_index_table(gt.uv_index_path());
  table.check(gt.resolution);
  std::optional<RegionSegmentation> seg;
  if (fs::exists(gt.segmentation_path())) seg = load_segmentation(gt);

  const Dims dims = o.dims == "xyz" ? Dims::xyz : Dims::xy;
  const BBoxNorm norm = o.norm == "max_side" ? BBoxNorm::max_side : BBoxNorm::geometric_mean;
  ReconOptions recon;
  recon.icp.with_scale = o.with_scale;
  recon.metric = o.squared ? ReconMetric::mean_squared_distance : ReconMetric::mean_distance;

  std::vector<SampleError> errors;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const std::string& id = gt.entries[i].id;
    const auto it = pred_index.find(id);
    if (it == pred_index.end()) throw InvalidArgument("prediction for sample " + id + " is missing");
    const SampleMeta meta = load_meta(gt.meta_path(i));
    const PositionMap g = load_uvpm(gt.posmap_path(i));
    const PositionMap p = load_uvpm(pred.posmap_path(it->second));

    double err = 0.0;
    if (o.mode == "landmarks") {
      err = nme_landmarks(landmarks_from_map(p, table), landmarks_from_map(g, table), meta.bbox, dims, norm);
    } else {
      const std::vector<std::size_t> pixels = dense_pixels(g, seg ? &*seg : nullptr);
      if (o.mode == "dense") {
        err = nme_dense(gather(p, pixels), gather(g, pixels), meta.bbox, dims, norm);
      } else {
        const LandmarkSet lm = landmarks_from_map(g, table);
        err = recon_error(gather(p, pixels), gather(g, pixels), lm.points[kOuterEyeLeft], lm.points[kOuterEyeRight],
                          recon);
      }
    }
    errors.push_back({id, meta.yaw_degrees, err});
  }

  EvalReport report = bucket_by_yaw(errors);
  std::vector<double> values;
  for (const auto& s : report.samples) values.push_back(s.error);
  report.curve = ced(values, o.cutoff);

  const fs::path out = o.output.empty() ? fs::path("report") : o.output;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_report_csv(report, with_suffix(out, ".csv"));
  write_report_json(report, o.mode, with_suffix(out, ".json"));
  std::cout << "eval: " << o.mode << " mean " << report.mean << " over " << report.samples.size() << " samples\n";
  return 0;
}

int run_ced_plot(const CedPlotOpts& o) {
  if (!o.labels.empty() && o.labels.size() != o.reports.size()) {
    throw InvalidArgument("--label must be given once per report or not at all");
  }
  std::vector<CedSeries> series;
  for (std::size_t i = 0; i < o.reports.size(); ++i) {
    std::vector<double> errs;
    for (const SampleError& s : read_report_csv(o.reports[i])) errs.push_back(s.error);
    series.push_back({o.labels.empty() ? o.reports[i].stem().string() : o.labels[i], ced(errs, o.cutoff)});
  }
  write_file(with_suffix(o.output, ".svg"), ced_svg(series));

  std::ostringstream csv;
  csv << "threshold";
  for (const auto& s : series) csv << ',' << s.label;
  csv << '\n';
  for (int k = 0; k < kCedPoints; ++k) {
    csv << format_double(series.front().curve.thresholds[k]);
    for (const auto& s : series) csv << ',' << format_double(s.curve.fractions[k]);
    csv << '\n';
  }
  write_file(with_suffix(o.output, ".csv"), csv.str());
  for (const auto& s : series) std::cout << s.label << ": mean " << s.curve.mean << ", auc " << s.curve.auc << "\n";
  return 0;
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const CorruptFileError*>(&e)) return "corrupt-file";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const ShapeError*>(&e)) return "shape";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "invalid-argument";
  if (dynamic_cast<const GeometryError*>(&e)) return "geometry";
  return "runtime";
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Face shape regression and evaluation with UV position maps", "uvface"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "uvface 0.1.0");

  const auto existing = CLI::ExistingFile;

  ParamOpts param;
  auto* c_param = app.add_subcommand("param", "Tutte-embed a disk-topology mesh into the unit square");
  c_param->add_option("mesh", param.input, "input mesh")->required()->check(existing);
  c_param->add_option("-o,--output", param.output, "output mesh with uv")->required();
  c_param->add_option("--weights", param.weights, "Laplacian weights")
      ->check(CLI::IsMember({"conformal", "uniform", "mean_value"}))
      ->capture_default_str();

  BakeOpts bake_o;
  auto* c_bake = app.add_subcommand("bake", "Rasterize mesh positions into a UV position map");
  c_bake->add_option("mesh", bake_o.input, "mesh with uv")->required()->check(existing);
  c_bake->add_option("-o,--output", bake_o.output, "output .uvpm")->required();
  c_bake->add_option("--size", bake_o.size, "map size")->check(CLI::Range(1, 4096))->capture_default_str();

  UnbakeOpts unbake_o;
  auto* c_unbake = app.add_subcommand("unbake", "Recover a point cloud (or mesh) from a position map");
  c_unbake->add_option("posmap", unbake_o.input, "input .uvpm")->required()->check(existing);
  c_unbake->add_option("-o,--output", unbake_o.output, "output point cloud or mesh")->required();
  c_unbake->add_option("--topology", unbake_o.topology, "mesh with uv; writes a mesh instead of points")
      ->check(existing);

  MaskOpts mask_o;
  auto* c_mask = app.add_subcommand("mask", "Build a weight-mask image from a region segmentation");
  c_mask->add_option("segmentation", mask_o.segmentation, "segmentation PNG")->required()->check(existing);
  c_mask->add_option("-o,--output", mask_o.output, "output mask PNG")->required();
  c_mask->add_option("--ratio", mask_o.ratio, "weights landmark:eye-nose-mouth:face:neck")->capture_default_str();

  GenOpts gen;
  auto* c_gen = app.add_subcommand("gen", "Generate a synthetic face dataset");
  c_gen->add_option("-o,--output", gen.output, "dataset directory")->required();
  c_gen->add_option("--spec", gen.spec_file, "JSON generator spec")->check(existing);
  c_gen->add_option("--count", gen.count, "number of samples");
  c_gen->add_option("--resolution", gen.resolution, "image and map size (multiple of 32)");
  c_gen->add_option("--grid", gen.grid, "template vertices per side (odd)");
  c_gen->add_option("--yaw-max", gen.yaw_max, "yaw drawn from [-yaw-max, yaw-max] degrees");
  c_gen->add_option("--seed", gen.seed, "generator seed");

  AugmentOpts aug;
  auto* c_aug = app.add_subcommand("augment", "Write randomly perturbed copies of a dataset");
  c_aug->add_option("dataset", aug.input, "input dataset directory")->required()->check(CLI::ExistingDirectory);
  c_aug->add_option("-o,--output", aug.output, "output dataset directory")->required();
  c_aug->add_option("--copies", aug.copies, "perturbed copies per sample")->check(CLI::Range(1, 1000))->capture_default_str();
  c_aug->add_option("--seed", aug.seed, "augmentation seed")->capture_default_str();
  c_aug->add_option("--occlusion", aug.occlusion, "probability of a synthetic occluder")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  TrainOpts tr;
  auto* c_train = app.add_subcommand("train", "Train the encoder-decoder regressor");
  c_train->add_option("dataset", tr.data, "training dataset directory")->required()->check(CLI::ExistingDirectory);
  c_train->add_option("-o,--output", tr.output, "checkpoint path")->required();
  c_train->add_option("--loss-csv", tr.loss_csv, "loss curve CSV (default: <output>.loss.csv)");
  c_train->add_option("--base", tr.base, "channels of the first layer")->check(CLI::PositiveNumber)->capture_default_str();
  c_train->add_option("--bottleneck", tr.bottleneck, "bottleneck channels")->check(CLI::PositiveNumber)->capture_default_str();
  c_train->add_option("--ratio", tr.ratio, "loss weight ratio")->capture_default_str();
  c_train->add_option("--epochs", tr.epochs, "epochs")->check(CLI::PositiveNumber)->capture_default_str();
  c_train->add_option("--max-steps", tr.max_steps, "stop after this many updates (0: no limit)")->capture_default_str();
  c_train->add_option("--batch", tr.batch, "batch size")->check(CLI::PositiveNumber)->capture_default_str();
  c_train->add_option("--lr", tr.lr, "initial learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  c_train->add_option("--halving", tr.halving, "epochs between learning-rate halvings")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_train->add_option("--seed", tr.seed, "initialization and batch-order seed")->capture_default_str();
  c_train->add_flag("--augment", tr.augment, "perturb every batch on the fly");
  c_train->add_option("--aug-rotation", tr.ranges.max_rotation_degrees, "maximum rotation in degrees (with --augment)")
      ->check(CLI::Range(0.0, 45.0))
      ->capture_default_str();
  c_train->add_option("--aug-translation", tr.ranges.max_translation, "maximum shift per axis as a fraction of size")
      ->check(CLI::Range(0.0, 0.1))
      ->capture_default_str();
  c_train->add_option("--aug-scale", tr.scale_range, "minimum and maximum scale, within [0.9, 1.2]");
  c_train->add_option("--val-fraction", tr.val_fraction, "hold out this fraction for a validation loss")
      ->check(CLI::Range(0.0, 0.9))
      ->capture_default_str();

  PredictOpts pr;
  auto* c_pred = app.add_subcommand("predict", "Regress position maps for every image of a dataset");
  c_pred->add_option("checkpoint", pr.checkpoint, "model checkpoint")->required()->check(existing);
  c_pred->add_option("dataset", pr.data, "dataset directory")->required()->check(CLI::ExistingDirectory);
  c_pred->add_option("-o,--output", pr.output, "output dataset directory")->required();

  EvalOpts ev;
  auto* c_eval = app.add_subcommand("eval", "Score predicted position maps against ground truth");
  c_eval->add_option("--pred", ev.pred, "predicted dataset directory")->required()->check(CLI::ExistingDirectory);
  c_eval->add_option("--gt", ev.gt, "ground-truth dataset directory")->required()->check(CLI::ExistingDirectory);
  c_eval->add_option("--mode", ev.mode, "metric")
      ->check(CLI::IsMember({"landmarks", "dense", "recon"}))
      ->capture_default_str();
  c_eval->add_option("--dims", ev.dims, "NME coordinates")->check(CLI::IsMember({"xy", "xyz"}))->capture_default_str();
  c_eval->add_option("--bbox-norm", ev.norm, "bbox normalizer")
      ->check(CLI::IsMember({"geometric_mean", "max_side"}))
      ->capture_default_str();
  c_eval->add_option("--cutoff", ev.cutoff, "CED cutoff in percent")->check(CLI::PositiveNumber)->capture_default_str();
  c_eval->add_flag("--icp-scale", ev.with_scale, "allow a uniform scale in the ICP fit (recon mode)");
  c_eval->add_flag("--squared", ev.squared, "squared distances over squared interocular distance (recon mode)");
  c_eval->add_option("-o,--output", ev.output, "report path prefix; writes .csv and .json");

  CedPlotOpts cp;
  auto* c_ced = app.add_subcommand("ced-plot", "Plot CED curves of one or more per-sample reports");
  c_ced->add_option("reports", cp.reports, "per-sample report CSVs")->required()->check(existing);
  c_ced->add_option("--label", cp.labels, "legend label per report");
  c_ced->add_option("--cutoff", cp.cutoff, "maximum NME on the x axis")->check(CLI::PositiveNumber)->capture_default_str();
  c_ced->add_option("-o,--output", cp.output, "output prefix; writes .svg and .csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "uvface: error[usage]: " << one_line(e.what()) << "\n" << app.help();
    return 2;
  }

  try {
    if (*c_param) return run_param(param);
    if (*c_bake) return run_bake(bake_o);
    if (*c_unbake) return run_unbake(unbake_o);
    if (*c_mask) return run_mask(mask_o);
    if (*c_gen) return run_gen(gen);
    if (*c_aug) return run_augment(aug);
    if (*c_train) return run_train(tr);
    if (*c_pred) return run_predict(pr);
    if (*c_eval) return run_eval(ev);
    if (*c_ced) return run_ced_plot(cp);
  } catch (const std::exception& e) {
    std::cerr << "uvface: error[" << error_kind(e) << "]: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 2;
}
