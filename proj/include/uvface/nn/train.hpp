#pragma once

#include "uvface/augment.hpp"
#include "uvface/mask_loss.hpp"
#include "uvface/nn/prn.hpp"
#include "uvface/sample.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace uvface::nn {

/// Weighted position-map loss on a network output (N, 3, S, S) against targets in the
/// same layout. Per-sample loss follows cfg; the batch value is the mean over samples.
Tensor weighted_map_loss(const Tensor& output, std::span<const double> target_nchw, const WeightMask& mask,
                         const LossConfig& cfg);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamConfig cfg = {});

  /// One update with the given learning rate using the accumulated gradients.
  void step(double learning_rate);
  void zero_grad();
  long steps() const { return t_; }

 private:
  std::vector<Tensor> params_;
  AdamConfig cfg_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  long t_ = 0;
};

struct TrainConfig {
  double learning_rate = 1e-4;
  int halving_period = 5;  // epochs
  int batch_size = 16;
  int epochs = 1;
  long max_steps = 0;      // stop after this many updates when > 0
  std::uint64_t seed = 0;  // controls batch order
  LossConfig loss;
  AdamConfig adam;
  /// When set, every sample of every batch is perturbed with fresh parameters drawn
  /// from these ranges (seeded from `seed`); the stored data is never modified.
  std::optional<AugmentRanges> augment;

  void check() const;
};

/// Learning rate for a 0-based epoch: halves every `halving_period` epochs.
double learning_rate_at(const TrainConfig& cfg, int epoch);

struct StepRecord {
  long step = 0;
  int epoch = 0;
  double learning_rate = 0.0;
  double loss = 0.0;  // batch loss before the update
};

struct TrainResult {
  std::vector<StepRecord> curve;
};

using StepCallback = std::function<void(const StepRecord&)>;

/// Adam on the weighted loss. Batches are drawn from a seeded shuffle per epoch;
/// reductions run in sample-index order, so results are bit-reproducible.
TrainResult train(PrnModel& model, const std::vector<Sample>& data, const WeightMask& mask, const TrainConfig& cfg,
                  const StepCallback& on_step = {});

/// Loss of the current model on a set of samples (mean over samples), no gradients.
double evaluate_loss(const PrnModel& model, const std::vector<Sample>& data, const WeightMask& mask,
                     const LossConfig& cfg, int batch_size = 16);

}  // namespace uvface::nn
