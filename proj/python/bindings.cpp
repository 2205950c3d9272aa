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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace uvface;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array points_to_array(const std::vector<Vec3>& pts) {
  Array out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int k = 0; k < 3; ++k) a(i, k) = pts[i][k];
  return out;
}

std::vector<Vec3> array_to_points(const Array& arr, const char* what) {
  if (arr.ndim() != 2 || arr.shape(1) != 3) throw ShapeError(std::string(what) + " must have shape (N, 3)");
  auto a = arr.unchecked<2>();
  std::vector<Vec3> pts(static_cast<std::size_t>(arr.shape(0)));
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = Vec3(a(i, 0), a(i, 1), a(i, 2));
  return pts;
}

LandmarkSet array_to_landmarks(const Array& arr) {
  const std::vector<Vec3> pts = array_to_points(arr, "landmarks");
  if (pts.size() != kNumLandmarks) throw ShapeError("landmarks must have shape (68, 3)");
  LandmarkSet s;
  std::copy(pts.begin(), pts.end(), s.points.begin());
  return s;
}

BBox2 to_bbox(const std::array<double, 4>& b) {
  BBox2 out;
  out.min = Vec2(b[0], b[1]);
  out.max = Vec2(b[2], b[3]);
  return out;
}

Dims to_dims(const std::string& s) {
  if (s == "xy") return Dims::xy;
  if (s == "xyz") return Dims::xyz;
  throw InvalidArgument("dims must be 'xy' or 'xyz'");
}

LaplacianWeights to_weights(const std::string& s) {
  if (s == "conformal") return LaplacianWeights::conformal;
  if (s == "uniform") return LaplacianWeights::uniform;
  if (s == "mean_value") return LaplacianWeights::mean_value;
  throw InvalidArgument("unknown Laplacian weights '" + s + "'");
}

Array image_to_array(const RgbImage& img) {
  Array out({img.height, img.width, 3});
  std::copy(img.data.begin(), img.data.end(), out.mutable_data());
  return out;
}

RgbImage array_to_image(const Array& arr) {
  if (arr.ndim() != 3 || arr.shape(2) != 3) throw ShapeError("image must have shape (H, W, 3)");
  RgbImage img(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
  std::copy(arr.data(), arr.data() + arr.size(), img.data.begin());
  return img;
}

Array posmap_values(const PositionMap& pm) {
  Array out({pm.size(), pm.size(), 3});
  std::copy(pm.data().begin(), pm.data().end(), out.mutable_data());
  return out;
}

py::array_t<bool> posmap_mask(const PositionMap& pm) {
  py::array_t<bool> out({pm.size(), pm.size()});
  bool* dst = out.mutable_data();
  for (std::size_t i = 0; i < pm.mask().size(); ++i) dst[i] = pm.mask()[i] != 0;
  return out;
}

PositionMap posmap_from_arrays(const Array& values, const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask) {
  if (values.ndim() != 3 || values.shape(0) != values.shape(1) || values.shape(2) != 3) {
    throw ShapeError("position map values must have shape (S, S, 3)");
  }
  const int n = static_cast<int>(values.shape(0));
  if (mask.ndim() != 2 || mask.shape(0) != n || mask.shape(1) != n) throw ShapeError("mask must have shape (S, S)");
  PositionMap pm(n);
  auto v = values.unchecked<3>();
  auto m = mask.unchecked<2>();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (m(r, c)) pm.set(r, c, Vec3(v(r, c, 0), v(r, c, 1), v(r, c, 2)));
  return pm;
}

WeightMask mask_from_array(const Array& w) {
  if (w.ndim() != 2 || w.shape(0) != w.shape(1)) throw ShapeError("weights must have shape (S, S)");
  WeightMask m;
  m.size = static_cast<int>(w.shape(0));
  m.weights.assign(w.data(), w.data() + w.size());
  return m;
}

py::dict ced_to_dict(const CedCurve& c) {
  py::dict d;
  d["thresholds"] = c.thresholds;
  d["fractions"] = c.fractions;
  d["mean"] = c.mean;
  d["auc"] = c.auc;
  d["cutoff"] = c.cutoff;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "UV position-map toolkit: parameterization, baking, weighted loss, regression network and metrics";

  py::register_exception<Error>(m, "UvfaceError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CorruptFileError>(m, "CorruptFileError", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.attr("NUM_LANDMARKS") = kNumLandmarks;

  // ------------------------------------------------------------ meshes

  py::class_<Mesh>(m, "Mesh")
      .def(py::init<>())
      .def(py::init([](const Array& vertices, const std::vector<Triangle>& triangles) {
             Mesh mesh;
             mesh.vertices = array_to_points(vertices, "vertices");
             mesh.triangles = triangles;
             return mesh;
           }),
           py::arg("vertices"), py::arg("triangles"))
      .def_property(
          "vertices", [](const Mesh& mesh) { return points_to_array(mesh.vertices); },
          [](Mesh& mesh, const Array& a) { mesh.vertices = array_to_points(a, "vertices"); })
      .def_readwrite("triangles", &Mesh::triangles)
      .def_property(
          "uv",
          [](const Mesh& mesh) {
            Array out({static_cast<py::ssize_t>(mesh.uv.size()), py::ssize_t{2}});
            auto a = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < mesh.uv.size(); ++i) {
              a(i, 0) = mesh.uv[i].x();
              a(i, 1) = mesh.uv[i].y();
            }
            return out;
          },
          [](Mesh& mesh, const Array& a) {
            if (a.ndim() != 2 || a.shape(1) != 2) throw ShapeError("uv must have shape (N, 2)");
            auto v = a.unchecked<2>();
            mesh.uv.resize(static_cast<std::size_t>(a.shape(0)));
            for (std::size_t i = 0; i < mesh.uv.size(); ++i) mesh.uv[i] = Vec2(v(i, 0), v(i, 1));
          })
      .def_readwrite("landmark_indices", &Mesh::landmark_indices)
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_triangles", &Mesh::num_triangles)
      .def("validate", [](const Mesh& mesh) { validate(mesh); });

  m.def("load_mesh", &load_mesh, py::arg("path"));
  m.def("save_mesh", &save_mesh, py::arg("mesh"), py::arg("path"));

  m.def(
      "tutte_embed",
      [](const Mesh& mesh, const std::string& weights) {
        TutteOptions o;
        o.weights = to_weights(weights);
        const TutteResult r = tutte_embed_detailed(mesh, o);
        return py::make_tuple(r.mesh, r.relative_residual);
      },
      py::arg("mesh"), py::arg("weights") = "conformal",
      "Returns (mesh with uv, relative residual of the linear solve).");
  m.def(
      "uv_signed_areas", [](const Mesh& mesh) { return uv_signed_areas(mesh); }, py::arg("mesh"));

  // ------------------------------------------------------------ position maps

  py::class_<PositionMap>(m, "PositionMap")
      .def(py::init<int>(), py::arg("size"))
      .def(py::init(&posmap_from_arrays), py::arg("values"), py::arg("mask"))
      .def_property_readonly("size", &PositionMap::size)
      .def_property_readonly("values", &posmap_values)
      .def_property_readonly("mask", &posmap_mask)
      .def("valid_count", &PositionMap::valid_count)
      .def("__eq__", [](const PositionMap& a, const PositionMap& b) { return a == b; });

  m.def("bake", &bake, py::arg("mesh"), py::arg("size") = kDefaultMapSize);
  m.def(
      "unbake", [](const PositionMap& pm) { return points_to_array(unbake(pm).points); }, py::arg("posmap"));
  m.def(
      "resample_error",
      [](const Mesh& mesh, int size) {
        const ResampleError e = resample_error(mesh, size);
        return py::make_tuple(e.mean, e.max);
      },
      py::arg("mesh"), py::arg("size"), "Returns (mean, max) vertex distance after bake and lookup.");
  m.def("load_uvpm", &load_uvpm, py::arg("path"));
  m.def("save_uvpm", &save_uvpm, py::arg("posmap"), py::arg("path"));

  py::class_<UvIndexTable>(m, "UvIndexTable")
      .def_readonly("size", &UvIndexTable::size)
      .def_property_readonly("landmarks", [](const UvIndexTable& t) {
        std::vector<std::pair<int, int>> out;
        for (const PixelIndex& p : t.landmarks) out.emplace_back(p.row, p.col);
        return out;
      });
  m.def(
      "make_uv_index_table", [](const Mesh& mesh, int size) { return make_uv_index_table(mesh, size); },
      py::arg("mesh"), py::arg("size"));
  m.def("load_uv_index_table", &load_uv_index_table, py::arg("path"));
  m.def(
      "landmarks_from_map",
      [](const PositionMap& pm, const UvIndexTable& t) {
        const LandmarkSet s = landmarks_from_map(pm, t);
        return points_to_array(std::vector<Vec3>(s.points.begin(), s.points.end()));
      },
      py::arg("posmap"), py::arg("table"));

  // ------------------------------------------------------------ weighted loss

  m.def(
      "build_mask",
      [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& labels, const std::string& ratio) {
        GrayImage img(static_cast<int>(labels.shape(0)), labels.ndim() == 2 ? static_cast<int>(labels.shape(1)) : 0);
        if (labels.ndim() != 2) throw ShapeError("labels must have shape (S, S)");
        std::copy(labels.data(), labels.data() + labels.size(), img.data.begin());
        const WeightMask mask = build_mask(segmentation_from_image(img), WeightRatio::parse(ratio));
        Array out({mask.size, mask.size});
        std::copy(mask.weights.begin(), mask.weights.end(), out.mutable_data());
        return out;
      },
      py::arg("labels"), py::arg("ratio") = "16:4:3:0",
      "Per-pixel weights from region codes (0 background, 1 face, 2 eye/nose/mouth, 3 neck, 4 landmark).");
  m.def(
      "weighted_loss",
      [](const PositionMap& pred, const PositionMap& target, const Array& weights, const std::string& norm,
         const std::string& reduction) {
        LossConfig cfg;
        cfg.norm = norm == "l2" ? LossNorm::l2 : LossNorm::squared_l2;
        cfg.reduction = reduction == "mean_positive" ? LossReduction::mean_positive : LossReduction::sum;
        return weighted_loss(pred, target, mask_from_array(weights), cfg);
      },
      py::arg("pred"), py::arg("target"), py::arg("weights"), py::arg("norm") = "squared_l2",
      py::arg("reduction") = "sum");

  // ------------------------------------------------------------ augmentation

  m.def(
      "augment",
      [](const Array& image, const PositionMap& pm, std::uint64_t seed, double occlusion_probability) {
        Sample s;
        s.image = array_to_image(image);
        s.posmap = pm;
        AugmentRanges ranges;
        ranges.occlusion_probability = occlusion_probability;
        const Sample out = apply(s, sample_params(seed, s.image.width, ranges));
        return py::make_tuple(image_to_array(out.image), out.posmap);
      },
      py::arg("image"), py::arg("posmap"), py::arg("seed"), py::arg("occlusion_probability") = 0.0,
      "Random similarity transform and color scaling applied to an (image, position map) pair.");

  // ------------------------------------------------------------ datasets

  m.def(
      "generate_synthetic",
      [](const std::filesystem::path& root, int count, int resolution, int grid_size, double yaw_max,
         std::uint64_t seed) {
        SyntheticSpec spec;
        spec.count = count;
        spec.resolution = resolution;
        spec.grid_size = grid_size;
        spec.yaw_degrees = {-yaw_max, yaw_max};
        spec.seed = seed;
        return generate_synthetic(spec, root).size();
      },
      py::arg("root"), py::arg("count") = 200, py::arg("resolution") = 256, py::arg("grid_size") = 65,
      py::arg("yaw_max") = 60.0, py::arg("seed") = 0, "Writes a synthetic dataset and returns its sample count.");
  m.def(
      "load_sample",
      [](const std::filesystem::path& root, std::size_t index) {
        const Dataset ds = load_dataset(root);
        if (index >= ds.size()) throw InvalidArgument("sample index out of range");
        const Sample s = load_sample(ds, index);
        py::dict meta;
        meta["yaw"] = s.meta.yaw_degrees;
        meta["bbox"] = std::array<double, 4>{s.meta.bbox.min.x(), s.meta.bbox.min.y(), s.meta.bbox.max.x(),
                                             s.meta.bbox.max.y()};
        return py::make_tuple(image_to_array(s.image), s.posmap, meta);
      },
      py::arg("root"), py::arg("index"), "Returns (image (S, S, 3), PositionMap, meta dict).");

  // ------------------------------------------------------------ metrics

  m.def(
      "nme_landmarks",
      [](const Array& pred, const Array& gt, const std::array<double, 4>& bbox, const std::string& dims) {
        return nme_landmarks(array_to_landmarks(pred), array_to_landmarks(gt), to_bbox(bbox), to_dims(dims));
      },
      py::arg("pred"), py::arg("gt"), py::arg("bbox"), py::arg("dims") = "xy",
      "Mean landmark distance over sqrt(bbox width * height), in percent. bbox is (x0, y0, x1, y1).");
  m.def(
      "nme_dense",
      [](const Array& pred, const Array& gt, const std::array<double, 4>& bbox, const std::string& dims) {
        PointCloud p, g;
        p.points = array_to_points(pred, "pred");
        g.points = array_to_points(gt, "gt");
        return nme_dense(p, g, to_bbox(bbox), to_dims(dims));
      },
      py::arg("pred"), py::arg("gt"), py::arg("bbox"), py::arg("dims") = "xy");
  m.def(
      "ced", [](const std::vector<double>& errors, double cutoff) { return ced_to_dict(ced(errors, cutoff)); },
      py::arg("errors"), py::arg("cutoff"));
  m.def(
      "icp",
      [](const Array& pred, const Array& gt, int max_iters, double rel_tol, bool with_scale) {
        PointCloud p, g;
        p.points = array_to_points(pred, "pred");
        g.points = array_to_points(gt, "gt");
        IcpOptions o;
        o.max_iters = max_iters;
        o.rel_tol = rel_tol;
        o.with_scale = with_scale;
        const IcpResult r = icp(p, g, o);
        py::dict d;
        d["rotation"] = Eigen::Matrix3d(r.transform.rotation);
        d["translation"] = Vec3(r.transform.translation);
        d["scale"] = r.transform.scale;
        d["correspondence"] = r.correspondence;
        d["errors"] = r.errors;
        return d;
      },
      py::arg("pred"), py::arg("gt"), py::arg("max_iters") = 100, py::arg("rel_tol") = 1e-6,
      py::arg("with_scale") = false);
  m.def(
      "recon_error",
      [](const Array& pred, const Array& gt, const Vec3& eye_left, const Vec3& eye_right) {
        PointCloud p, g;
        p.points = array_to_points(pred, "pred");
        g.points = array_to_points(gt, "gt");
        return recon_error(p, g, eye_left, eye_right);
      },
      py::arg("pred"), py::arg("gt"), py::arg("outer_eye_left"), py::arg("outer_eye_right"));
  m.def(
      "bucket_by_yaw",
      [](const std::vector<double>& yaws, const std::vector<double>& errors) {
        if (yaws.size() != errors.size()) throw ShapeError("yaws and errors differ in length");
        std::vector<SampleError> s;
        for (std::size_t i = 0; i < yaws.size(); ++i) s.push_back({std::to_string(i), yaws[i], errors[i]});
        const EvalReport r = bucket_by_yaw(s);
        py::dict d;
        d["mean"] = r.mean;
        d["counts"] = r.bucket_counts;
        d["means"] = r.bucket_means;
        return d;
      },
      py::arg("yaws"), py::arg("errors"));

  // ------------------------------------------------------------ network

  py::class_<nn::PrnModel>(m, "PrnModel")
      .def(py::init([](int input_size, int base_channels, int bottleneck_channels, std::uint64_t seed) {
             return nn::PrnModel(nn::PrnArchitecture{input_size, base_channels, bottleneck_channels}, seed);
           }),
           py::arg("input_size") = 256, py::arg("base_channels") = 16, py::arg("bottleneck_channels") = 512,
           py::arg("seed") = 0)
      .def_property_readonly("input_size", [](const nn::PrnModel& mdl) { return mdl.arch().input_size; })
      .def_property_readonly("decoder_layer_count", &nn::PrnModel::decoder_layer_count)
      .def_property_readonly("parameter_count", &nn::PrnModel::parameter_count)
      .def(
          "encode_shape",
          [](const nn::PrnModel& mdl) {
            const int n = mdl.arch().input_size;
            const nn::Tensor x(nn::Shape{1, 3, n, n}, std::vector<double>(static_cast<std::size_t>(3) * n * n, 0.0));
            nn::NoGradGuard guard;
            return mdl.encode(x).shape();
          },
          "Shape (N, C, H, W) of the bottleneck for a single input image.")
      .def(
          "predict",
          [](const nn::PrnModel& mdl, const Array& images) {
            if (images.ndim() != 4 || images.shape(3) != 3) throw ShapeError("images must have shape (N, S, S, 3)");
            std::vector<RgbImage> imgs;
            const py::ssize_t n = images.shape(0), h = images.shape(1), w = images.shape(2);
            for (py::ssize_t i = 0; i < n; ++i) {
              RgbImage img(static_cast<int>(h), static_cast<int>(w));
              std::copy(images.data() + i * h * w * 3, images.data() + (i + 1) * h * w * 3, img.data.begin());
              imgs.push_back(std::move(img));
            }
            std::vector<const RgbImage*> ptrs;
            for (const auto& img : imgs) ptrs.push_back(&img);
            std::vector<PositionMap> maps;
            {
              py::gil_scoped_release release;
              maps = nn::predict(mdl, ptrs);
            }
            return maps;
          },
          py::arg("images"))
      .def("save", [](const nn::PrnModel& mdl, const std::filesystem::path& p) { nn::save_checkpoint(mdl, p); });
  m.def("load_model", &nn::load_checkpoint, py::arg("path"));

  m.def(
      "train_on_dataset",
      [](nn::PrnModel& model, const std::filesystem::path& root, const std::string& ratio, int epochs, long max_steps,
         double learning_rate, int batch_size, std::uint64_t seed) {
        const Dataset ds = load_dataset(root);
        const std::vector<Sample> samples = load_samples(ds);
        const WeightRatio r = WeightRatio::parse(ratio);
        const WeightMask mask = build_mask(segmentation_from_image(load_png_gray(ds.segmentation_path())), r);
        nn::TrainConfig cfg;
        cfg.epochs = epochs;
        cfg.max_steps = max_steps;
        cfg.learning_rate = learning_rate;
        cfg.batch_size = batch_size;
        cfg.seed = seed;
        cfg.loss.ratio = r;
        std::vector<double> losses;
        {
          py::gil_scoped_release release;
          for (const auto& rec : nn::train(model, samples, mask, cfg).curve) losses.push_back(rec.loss);
        }
        return losses;
      },
      py::arg("model"), py::arg("root"), py::arg("ratio") = "16:4:3:0", py::arg("epochs") = 1,
      py::arg("max_steps") = 0, py::arg("learning_rate") = 1e-4, py::arg("batch_size") = 16, py::arg("seed") = 0,
      "Trains in place on a dataset directory and returns the per-step batch losses.");
}
