#include "uvface/nn/prn.hpp"

#include "uvface/detail/binary_io.hpp"
#include "uvface/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace uvface::nn {

namespace {

constexpr Conv2dParams kSame{1, 1, 2};    // 4x4, stride 1: H -> H
constexpr Conv2dParams kHalve{2, 1, 1};   // 4x4, stride 2: H -> H/2 (and its transpose H/2 -> H)
constexpr Conv2dParams kPoint{1, 0, 0};

// Init gains of the second conv in each residual branch and of the output layer.
constexpr double kBranchGain = 0.5;
constexpr double kFinalGain = 0.25;

class Initializer {
 public:
  explicit Initializer(std::uint64_t seed) : rng_(seed) {}

  // Box-Muller on raw 53-bit draws keeps initialization identical across standard libraries.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  Tensor weights(Shape shape, double stddev) {
    std::vector<double> v(numel(shape));
    for (double& x : v) x = stddev * normal();
    return Tensor(std::move(shape), std::move(v), true);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Average number of kernel taps per output pixel (along one axis) that land inside
// the input rather than in the zero padding. Small maps lose most of a 4x4 kernel.
double taps_per_output(int in_size, int out_size, int kernel, const Conv2dParams& p, bool transposed) {
  long count = 0;
  if (!transposed) {
    for (int o = 0; o < out_size; ++o)
      for (int k = 0; k < kernel; ++k) {
        const int src = o * p.stride - p.pad_begin + k;
        count += src >= 0 && src < in_size;
      }
  } else {
    for (int i = 0; i < in_size; ++i)
      for (int k = 0; k < kernel; ++k) {
        const int dst = i * p.stride - p.pad_begin + k;
        count += dst >= 0 && dst < out_size;
      }
  }
  return static_cast<double>(count) / out_size;
}

ConvLayer make_conv(Initializer& init, std::string name, int in, int out, int kernel, Conv2dParams p, int in_size,
                    double gain = 1.0) {
  ConvLayer l;
  l.name = std::move(name);
  l.in_channels = in;
  l.out_channels = out;
  l.kernel = kernel;
  l.params = p;
  const double taps = taps_per_output(in_size, p.output_size(in_size, kernel), kernel, p, false);
  l.weight = init.weights({out, in, kernel, kernel}, gain * std::sqrt(2.0 / (in * taps * taps)));
  l.bias = Tensor::zeros({out}, true);
  return l;
}

ConvLayer make_deconv(Initializer& init, std::string name, int in, int out, Conv2dParams p, int in_size, int out_size,
                      bool last) {
  ConvLayer l;
  l.name = std::move(name);
  l.transposed = true;
  l.in_channels = in;
  l.out_channels = out;
  l.params = p;
  const double taps = taps_per_output(in_size, out_size, kKernel, p, true);
  const double fan_in = in * taps * taps;
  l.weight = init.weights({in, out, kKernel, kKernel}, last ? kFinalGain * std::sqrt(1.0 / fan_in) : std::sqrt(2.0 / fan_in));
  l.bias = Tensor::zeros({out}, true);
  return l;
}

}  // namespace

void PrnArchitecture::check() const {
  if (input_size < 32 || input_size % 32 != 0) {
    throw InvalidArgument("input_size must be a positive multiple of 32, got " + std::to_string(input_size));
  }
  if (base_channels < 1 || bottleneck_channels < 1) throw InvalidArgument("channel counts must be positive");
}

Tensor ConvLayer::forward(const Tensor& x, int out_size) const {
  if (!transposed) return conv2d(x, weight, bias, params);
  return conv_transpose2d(x, weight, bias, params, out_size, out_size);
}

PrnModel::PrnModel(const PrnArchitecture& arch, std::uint64_t seed) : PrnModel(arch, seed, Options{}) {}

PrnModel::PrnModel(const PrnArchitecture& arch, std::uint64_t seed, Options options) : arch_(arch) {
  arch_.check();
  Initializer init(seed);
  const int b = arch_.base_channels;

  int size = arch_.input_size;
  stem_ = make_conv(init, "stem", 3, b, kKernel, kSame, size);

  const int multipliers[kResidualBlocks] = {2, 2, 4, 4, 8, 8, 16, 16, 32, 32};
  int in = b;
  for (int i = 0; i < kResidualBlocks; ++i) {
    const int out = i >= kResidualBlocks - 2 ? arch_.bottleneck_channels : b * multipliers[i];
    const bool down = i % 2 == 0;
    const std::string name = "block" + std::to_string(i + 1);
    ResidualBlock blk;
    const int next = down ? size / 2 : size;
    blk.conv1 = make_conv(init, name + ".conv1", in, out, kKernel, down ? kHalve : kSame, size);
    blk.conv2 = make_conv(init, name + ".conv2", out, out, kKernel, kSame, next, kBranchGain);
    blk.has_projection = down || in != out;
    if (blk.has_projection) {
      blk.projection = make_conv(init, name + ".shortcut", in, out, 1, down ? Conv2dParams{2, 0, 0} : kPoint, size);
    }
    size = next;
    blocks_.push_back(std::move(blk));
    in = out;
  }

  // Decoder: 1 at the bottleneck, then stages of 3, 3, 3, 2, 2 (first layer of each
  // stage doubles the resolution), then 3 three-channel layers at full resolution.
  int layer = 0;
  auto push = [&](int out, bool up) {
    const bool last = layer == kDecoderLayers - 1;
    const int prev = size;
    if (up) size *= 2;
    decoder_.push_back(
        make_deconv(init, "deconv" + std::to_string(++layer), in, out, up ? kHalve : kSame, prev, size, last));
    decoder_sizes_.push_back(size);
    in = out;
  };
  push(arch_.bottleneck_channels, false);
  const int stage_mult[5] = {16, 8, 4, 2, 1};
  const int stage_len[5] = {3, 3, 3, 2, 2};
  for (int s = 0; s < 5; ++s) {
    for (int k = 0; k < stage_len[s]; ++k) push(b * stage_mult[s], k == 0);
  }
  for (int k = 0; k < 3; ++k) push(3, false);

  if (options.zero_final_layer) {
    auto& last = decoder_.back();
    for (double& v : last.weight.mutable_values()) v = 0.0;
    for (double& v : last.bias.mutable_values()) v = 0.0;
  }
}

Tensor PrnModel::encode(const Tensor& images) const {
  if (images.shape().size() != 4 || images.dim(1) != 3 || images.dim(2) != arch_.input_size ||
      images.dim(3) != arch_.input_size) {
    throw ShapeError("expected images of shape (N, 3, " + std::to_string(arch_.input_size) + ", " +
                     std::to_string(arch_.input_size) + "), got " + shape_str(images.shape()));
  }
  Tensor x = relu(stem_.forward(images));
  for (const auto& blk : blocks_) {
    Tensor h = relu(blk.conv1.forward(x));
    h = blk.conv2.forward(h);
    const Tensor shortcut = blk.has_projection ? blk.projection.forward(x) : x;
    x = relu(add(h, shortcut));
  }
  return x;
}

Tensor PrnModel::decode(const Tensor& features) const {
  Tensor x = features;
  for (std::size_t i = 0; i < decoder_.size(); ++i) {
    x = decoder_[i].forward(x, decoder_sizes_[i]);
    x = i + 1 == decoder_.size() ? sigmoid(x) : relu(x);
  }
  return x;
}

Tensor PrnModel::forward(const Tensor& images) const {
  return scale(decode(encode(images)), kOutputScale * arch_.input_size);
}

std::vector<Tensor> PrnModel::parameters() const {
  std::vector<Tensor> out;
  auto add_layer = [&out](const ConvLayer& l) {
    out.push_back(l.weight);
    out.push_back(l.bias);
  };
  add_layer(stem_);
  for (const auto& blk : blocks_) {
    add_layer(blk.conv1);
    add_layer(blk.conv2);
    if (blk.has_projection) add_layer(blk.projection);
  }
  for (const auto& l : decoder_) add_layer(l);
  return out;
}

std::size_t PrnModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : parameters()) n += t.size();
  return n;
}

std::vector<double> PrnModel::flat_parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& t : parameters()) flat.insert(flat.end(), t.values().begin(), t.values().end());
  return flat;
}

void PrnModel::set_flat_parameters(std::span<const double> values) {
  if (values.size() != parameter_count()) throw ShapeError("parameter vector has the wrong length");
  std::size_t off = 0;
  for (auto t : parameters()) {
    auto dst = t.mutable_values();
    std::copy(values.begin() + static_cast<std::ptrdiff_t>(off),
              values.begin() + static_cast<std::ptrdiff_t>(off + dst.size()), dst.begin());
    off += dst.size();
  }
}

Tensor images_to_tensor(const std::vector<const RgbImage*>& images) {
  if (images.empty()) throw InvalidArgument("empty image batch");
  const int H = images.front()->height;
  const int W = images.front()->width;
  const int N = static_cast<int>(images.size());
  std::vector<double> v(static_cast<std::size_t>(N) * 3 * H * W);
  const std::size_t plane = static_cast<std::size_t>(H) * W;
  for (int n = 0; n < N; ++n) {
    const RgbImage& img = *images[n];
    if (img.height != H || img.width != W) throw ShapeError("images in a batch differ in size");
    for (std::size_t p = 0; p < plane; ++p) {
      for (int c = 0; c < 3; ++c) v[(static_cast<std::size_t>(n) * 3 + c) * plane + p] = img.data[p * 3 + c];
    }
  }
  return Tensor({N, 3, H, W}, std::move(v));
}

std::vector<double> posmaps_to_nchw(const std::vector<const PositionMap*>& maps) {
  if (maps.empty()) return {};
  const int S = maps.front()->size();
  const std::size_t plane = static_cast<std::size_t>(S) * S;
  std::vector<double> v(maps.size() * 3 * plane);
  for (std::size_t n = 0; n < maps.size(); ++n) {
    if (maps[n]->size() != S) throw ShapeError("position maps in a batch differ in size");
    const auto& d = maps[n]->data();
    for (std::size_t p = 0; p < plane; ++p) {
      for (int c = 0; c < 3; ++c) v[(n * 3 + c) * plane + p] = d[p * 3 + c];
    }
  }
  return v;
}

std::vector<PositionMap> tensor_to_posmaps(const Tensor& output) {
  if (output.shape().size() != 4 || output.dim(1) != 3 || output.dim(2) != output.dim(3)) {
    throw ShapeError("expected (N, 3, S, S) output, got " + shape_str(output.shape()));
  }
  const int N = output.dim(0);
  const int S = output.dim(2);
  const std::size_t plane = static_cast<std::size_t>(S) * S;
  std::vector<PositionMap> maps;
  for (int n = 0; n < N; ++n) {
    PositionMap m(S);
    for (std::size_t p = 0; p < plane; ++p) {
      const auto* base = output.values().data() + static_cast<std::size_t>(n) * 3 * plane;
      m.set(static_cast<int>(p / S), static_cast<int>(p % S), Vec3(base[p], base[plane + p], base[2 * plane + p]));
    }
    maps.push_back(std::move(m));
  }
  return maps;
}

std::vector<PositionMap> predict(const PrnModel& model, const std::vector<const RgbImage*>& images) {
  for (const auto* img : images) {
    if (img->height != model.arch().input_size || img->width != model.arch().input_size) {
      throw ShapeError("image is " + std::to_string(img->height) + "x" + std::to_string(img->width) +
                       " but the model expects " + std::to_string(model.arch().input_size));
    }
  }
  NoGradGuard no_grad;
  return tensor_to_posmaps(model.forward(images_to_tensor(images)));
}

namespace {
constexpr char kMagic[4] = {'P', 'R', 'N', 'W'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_checkpoint(const PrnModel& model, const std::filesystem::path& path) {
  detail::ByteWriter w;
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(model.arch().input_size));
  w.u32(static_cast<std::uint32_t>(model.arch().base_channels));
  w.u32(static_cast<std::uint32_t>(model.arch().bottleneck_channels));
  const auto flat = model.flat_parameters();
  w.u64(flat.size());
  for (double v : flat) w.f64(v);
  detail::write_binary(path, w.buffer());
}

PrnModel load_checkpoint(const std::filesystem::path& path) {
  const auto bytes = detail::read_binary(path);
  detail::ByteReader r(bytes);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (!std::equal(magic, magic + 4, kMagic)) throw CorruptFileError("bad magic, expected PRNW", 0);
  if (r.u32("version") != kVersion) throw CorruptFileError("unsupported checkpoint version", 4);
  PrnArchitecture arch;
  arch.input_size = static_cast<int>(r.u32("input_size"));
  arch.base_channels = static_cast<int>(r.u32("base_channels"));
  arch.bottleneck_channels = static_cast<int>(r.u32("bottleneck_channels"));
  try {
    arch.check();
  } catch (const InvalidArgument& e) {
    throw CorruptFileError(e.what(), 8);
  }
  PrnModel model(arch, 0);
  const std::size_t count_at = r.offset();
  const std::uint64_t count = r.u64("parameter count");
  if (count != model.parameter_count()) {
    throw CorruptFileError("parameter count does not match the architecture", count_at);
  }
  std::vector<double> flat(count);
  for (double& v : flat) v = r.f64("parameters");
  if (r.remaining() != 0) throw CorruptFileError("trailing bytes after parameters", r.offset());
  model.set_flat_parameters(flat);
  return model;
}

}  // namespace uvface::nn
