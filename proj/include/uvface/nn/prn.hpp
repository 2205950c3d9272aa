#pragma once

#include "uvface/nn/ops.hpp"
#include "uvface/nn/tensor.hpp"
#include "uvface/image.hpp"
#include "uvface/posmap.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace uvface::nn {

inline constexpr int kKernel = 4;
inline constexpr int kDecoderLayers = 17;
inline constexpr int kResidualBlocks = 10;
/// Network coordinates are sigmoid outputs times this factor times the input size.
inline constexpr double kOutputScale = 1.1;

struct PrnArchitecture {
  int input_size = 256;
  int base_channels = 16;
  int bottleneck_channels = 512;

  void check() const;
  int bottleneck_spatial() const { return input_size / 32; }
  bool operator==(const PrnArchitecture&) const = default;
};

/// One convolution or transposed convolution with its parameters.
struct ConvLayer {
  std::string name;
  bool transposed = false;
  int in_channels = 0;
  int out_channels = 0;
  int kernel = kKernel;
  Conv2dParams params;
  Tensor weight;  // conv: (out, in, K, K); transposed: (in, out, K, K)
  Tensor bias;    // (out)

  /// For transposed layers out_size is the requested output resolution.
  Tensor forward(const Tensor& x, int out_size = 0) const;
};

struct ResidualBlock {
  ConvLayer conv1;
  ConvLayer conv2;
  bool has_projection = false;
  ConvLayer projection;  // 1x1, only when the shape changes
};

/// Encoder: conv (stride 1) then 10 residual blocks halving resolution on blocks
/// 1, 3, 5, 7, 9. Decoder: 17 transposed convolutions, sigmoid on the last.
class PrnModel {
 public:
  struct Options {
    bool zero_final_layer = false;
  };

  PrnModel(const PrnArchitecture& arch, std::uint64_t seed);
  PrnModel(const PrnArchitecture& arch, std::uint64_t seed, Options options);

  const PrnArchitecture& arch() const { return arch_; }

  /// Images (N, 3, S, S) -> bottleneck features (N, C, S/32, S/32).
  Tensor encode(const Tensor& images) const;
  /// Features -> sigmoid output (N, 3, S, S) in [0, 1].
  Tensor decode(const Tensor& features) const;
  /// Full network, output scaled to coordinates: (N, 3, S, S) in [0, 1.1 S].
  Tensor forward(const Tensor& images) const;

  /// All trainable tensors in schedule order (encoder, then decoder; weight before bias).
  std::vector<Tensor> parameters() const;
  std::size_t parameter_count() const;
  int decoder_layer_count() const { return static_cast<int>(decoder_.size()); }
  const std::vector<ConvLayer>& decoder() const { return decoder_; }
  const std::vector<ResidualBlock>& encoder_blocks() const { return blocks_; }

  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> values);

 private:
  PrnArchitecture arch_;
  ConvLayer stem_;
  std::vector<ResidualBlock> blocks_;
  std::vector<ConvLayer> decoder_;
  std::vector<int> decoder_sizes_;  // output resolution per decoder layer
};

/// Packs RGB images (row-major H x W x 3) into an (N, 3, S, S) tensor.
Tensor images_to_tensor(const std::vector<const RgbImage*>& images);
/// Packs position maps into (N, 3, S, S).
std::vector<double> posmaps_to_nchw(const std::vector<const PositionMap*>& maps);
/// Network output (N, 3, S, S) -> position maps with every pixel valid.
std::vector<PositionMap> tensor_to_posmaps(const Tensor& output);

/// Convenience wrapper over forward() for inference.
std::vector<PositionMap> predict(const PrnModel& model, const std::vector<const RgbImage*>& images);

// Checkpoint: "PRNW", u32 version = 1, u32 input_size, u32 base_channels,
// u32 bottleneck_channels, u64 parameter count, then float64 parameters in schedule order.
void save_checkpoint(const PrnModel& model, const std::filesystem::path& path);
PrnModel load_checkpoint(const std::filesystem::path& path);

}  // namespace uvface::nn
