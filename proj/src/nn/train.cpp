#include "uvface/nn/train.hpp"

#include "uvface/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace uvface::nn {

Tensor weighted_map_loss(const Tensor& output, std::span<const double> target_nchw, const WeightMask& mask,
                         const LossConfig& cfg) {
  if (output.shape().size() != 4 || output.dim(1) != 3 || output.dim(2) != mask.size || output.dim(3) != mask.size) {
    throw ShapeError("loss expects output (N, 3, " + std::to_string(mask.size) + ", " + std::to_string(mask.size) +
                     "), got " + shape_str(output.shape()));
  }
  if (target_nchw.size() != output.size()) throw ShapeError("loss target has the wrong size");
  const int N = output.dim(0);
  const std::size_t plane = static_cast<std::size_t>(mask.size) * mask.size;

  // Interleave to the per-pixel xyz layout the loss kernel works on.
  auto to_hwc = [plane](const double* nchw, std::vector<double>& hwc) {
    for (std::size_t p = 0; p < plane; ++p) {
      for (int c = 0; c < 3; ++c) hwc[p * 3 + c] = nchw[c * plane + p];
    }
  };
  std::vector<double> pred(plane * 3), target(plane * 3);
  double total = 0.0;
  for (int n = 0; n < N; ++n) {
    to_hwc(output.values().data() + n * 3 * plane, pred);
    to_hwc(target_nchw.data() + n * 3 * plane, target);
    total += weighted_loss(pred, target, mask.weights, cfg);
  }
  std::vector<double> targets(target_nchw.begin(), target_nchw.end());
  return make_result({1}, {total / N}, {output}, [targets = std::move(targets), mask, cfg, N, plane](Node& self) {
    Node& on = *self.parents[0];
    auto& g = on.ensure_grad();
    std::vector<double> pred(plane * 3), target(plane * 3), grad(plane * 3);
    const double upstream = self.grad[0] / N;
    for (int n = 0; n < N; ++n) {
      const std::size_t base = static_cast<std::size_t>(n) * 3 * plane;
      for (std::size_t p = 0; p < plane; ++p) {
        for (int c = 0; c < 3; ++c) {
          pred[p * 3 + c] = on.value[base + c * plane + p];
          target[p * 3 + c] = targets[base + c * plane + p];
        }
      }
      weighted_loss_grad(pred, target, mask.weights, cfg, grad);
      for (std::size_t p = 0; p < plane; ++p) {
        for (int c = 0; c < 3; ++c) g[base + c * plane + p] += upstream * grad[p * 3 + c];
      }
    }
  });
}

Adam::Adam(std::vector<Tensor> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
  for (const auto& p : params_) {
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

void Adam::step(double learning_rate) {
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto g = params_[i].grad();
    if (g.empty()) continue;
    auto w = params_[i].mutable_values();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t k = 0; k < w.size(); ++k) {
      m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * g[k];
      v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * g[k] * g[k];
      w[k] -= learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + cfg_.epsilon);
    }
  }
}

void TrainConfig::check() const {
  if (!(learning_rate > 0.0) || halving_period <= 0 || batch_size <= 0 || epochs <= 0 || max_steps < 0) {
    throw InvalidArgument("training configuration values must be positive");
  }
  if (augment) augment->check();
}

double learning_rate_at(const TrainConfig& cfg, int epoch) {
  return cfg.learning_rate * std::ldexp(1.0, -(epoch / cfg.halving_period));
}

namespace {

struct Batch {
  Tensor images;
  std::vector<double> targets;
};

Batch make_batch(const std::vector<Sample>& data, std::span<const std::size_t> idx) {
  std::vector<const RgbImage*> imgs;
  std::vector<const PositionMap*> maps;
  for (std::size_t i : idx) {
    imgs.push_back(&data[i].image);
    maps.push_back(&data[i].posmap);
  }
  return {images_to_tensor(imgs), posmaps_to_nchw(maps)};
}

Batch make_augmented_batch(const std::vector<Sample>& data, std::span<const std::size_t> idx,
                           const AugmentRanges& ranges, std::mt19937_64& rng) {
  std::vector<Sample> perturbed;
  perturbed.reserve(idx.size());
  for (std::size_t i : idx) {
    perturbed.push_back(apply(data[i], sample_params(rng(), data[i].image.width, ranges)));
  }
  std::vector<std::size_t> all(perturbed.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return make_batch(perturbed, all);
}

void check_data(const PrnModel& model, const std::vector<Sample>& data, const WeightMask& mask) {
  if (data.empty()) throw InvalidArgument("training set is empty");
  const int S = model.arch().input_size;
  if (mask.size != S) throw ShapeError("weight mask size does not match the model input size");
  for (const auto& s : data) {
    if (s.image.height != S || s.image.width != S || s.posmap.size() != S) {
      throw ShapeError("sample resolution does not match the model input size " + std::to_string(S));
    }
  }
}

}  // namespace

TrainResult train(PrnModel& model, const std::vector<Sample>& data, const WeightMask& mask, const TrainConfig& cfg,
                  const StepCallback& on_step) {
  cfg.check();
  check_data(model, data, mask);
  Adam opt(model.parameters(), cfg.adam);
  TrainResult result;
  std::vector<std::size_t> order(data.size());
  std::mt19937_64 rng(cfg.seed);
  std::mt19937_64 aug_rng(cfg.seed ^ 0x2545f4914f6cdd1dULL);

  long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates with raw draws; std::shuffle's algorithm is implementation-defined.
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    const double lr = learning_rate_at(cfg, epoch);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const auto idx = std::span(order).subspan(start, end - start);
      const Batch batch = cfg.augment ? make_augmented_batch(data, idx, *cfg.augment, aug_rng) : make_batch(data, idx);
      opt.zero_grad();
      const Tensor loss = weighted_map_loss(model.forward(batch.images), batch.targets, mask, cfg.loss);
      backward(loss);
      opt.step(lr);
      StepRecord rec{++step, epoch, lr, loss.values()[0]};
      result.curve.push_back(rec);
      if (on_step) on_step(rec);
      if (cfg.max_steps > 0 && step >= cfg.max_steps) return result;
    }
  }
  return result;
}

double evaluate_loss(const PrnModel& model, const std::vector<Sample>& data, const WeightMask& mask,
                     const LossConfig& cfg, int batch_size) {
  check_data(model, data, mask);
  NoGradGuard no_grad;
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  double total = 0.0;
  for (std::size_t start = 0; start < idx.size(); start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(idx.size(), start + static_cast<std::size_t>(batch_size));
    const Batch batch = make_batch(data, std::span(idx).subspan(start, end - start));
    const Tensor out = model.forward(batch.images);
    total += weighted_map_loss(out, batch.targets, mask, cfg).values()[0] * static_cast<double>(end - start);
  }
  return total / static_cast<double>(data.size());
}

}  // namespace uvface::nn
