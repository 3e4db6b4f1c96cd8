#pragma once

#include "srnn/elman.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace srnn {

struct LabeledSequence {
  Sentence inputs;  // EOS-terminated
  int label = 0;
};

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 100;
  /// Number of steps gradients flow back from the EOS word; 0 = whole sentence.
  int bptt_horizon = 0;
  std::uint64_t seed = 1;
  /// W_in and W_rec are kept inside the open interval (-weight_clip, weight_clip).
  double weight_clip = 1.0;
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double accuracy = 0.0;
};

/// Cross-entropy of the EOS classification, -log p[label].
double sentence_loss(const ElmanParams& params, std::span<const Vector> sentence, int label);

struct LossGradient {
  double loss = 0.0;
  ElmanParams grad;
};

/// Loss and its gradient with respect to all four weight matrices, by
/// backpropagation through time. `horizon` as in TrainConfig::bptt_horizon.
LossGradient loss_gradient(const ElmanParams& params, std::span<const Vector> sentence, int label,
                           int horizon = 0);

/// Glorot-uniform initialization, deterministic in `seed`.
ElmanParams glorot_init(const ElmanDims& dims, std::uint64_t seed);

/// Per-sentence SGD over shuffled epochs, starting from glorot_init(dims, cfg.seed).
/// Throws ConfigError on invalid configuration and TrainingDiverged when the
/// loss becomes non-finite.
ElmanParams bptt_train(std::span<const LabeledSequence> dataset, const TrainConfig& cfg,
                       const ElmanDims& dims = {},
                       const std::function<void(const EpochStats&)>& on_epoch = {});

/// Same as above but continues from `initial`.
ElmanParams bptt_train(std::span<const LabeledSequence> dataset, const TrainConfig& cfg,
                       ElmanParams initial,
                       const std::function<void(const EpochStats&)>& on_epoch = {});

/// Largest recurrent-layer pre-activation seen over the dataset in continuous
/// mode. Falls back to 1.0 when no pre-activation is positive.
double calibrate_activation(const ElmanParams& params, std::span<const LabeledSequence> dataset);

}  // namespace srnn
