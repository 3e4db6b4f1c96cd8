#include "srnn/train.hpp"

#include "srnn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace srnn {

namespace {

struct Trace {
  std::vector<Vector> proj_pre;  // proj * x
  std::vector<Vector> proj_out;  // ReLU of the above
  std::vector<Vector> hid_pre;   // in * p + rec * h_prev
  std::vector<Vector> hid_out;   // h_t
  Vector probabilities;
};

Trace run_traced(const ElmanParams& params, std::span<const Vector> sentence) {
  if (sentence.empty()) throw InputError("sentence must contain at least the EOS vector");
  Trace tr;
  Vector h = Vector::Zero(params.rec.rows());
  for (const Vector& x : sentence) {
    if (x.size() != params.proj.cols()) throw DimensionError("word vector has wrong length");
    Vector z = params.proj * x;
    Vector p = z.cwiseMax(0.0);
    Vector a = params.in * p + params.rec * h;
    h = a.cwiseMax(0.0);
    tr.proj_pre.push_back(std::move(z));
    tr.proj_out.push_back(std::move(p));
    tr.hid_pre.push_back(std::move(a));
    tr.hid_out.push_back(h);
  }
  tr.probabilities = softmax(params.out * h);
  return tr;
}

void check_label(const ElmanParams& params, int label) {
  if (label < 0 || label >= params.out.rows())
    throw InputError("label " + std::to_string(label) + " outside the class range");
}

Vector relu_mask(const Vector& pre) {
  return pre.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
}

}  // namespace

double sentence_loss(const ElmanParams& params, std::span<const Vector> sentence, int label) {
  check_label(params, label);
  const ForwardResult fr = forward_sentence(params, sentence, Activation::continuous());
  return -std::log(fr.probabilities[label]);
}

LossGradient loss_gradient(const ElmanParams& params, std::span<const Vector> sentence, int label,
                           int horizon) {
  check_label(params, label);
  const Trace tr = run_traced(params, sentence);
  const auto steps = static_cast<int>(sentence.size());

  LossGradient lg;
  lg.loss = -std::log(tr.probabilities[label]);
  lg.grad = ElmanParams::zeros(params.dims());

  Vector dlogits = tr.probabilities;
  dlogits[label] -= 1.0;
  lg.grad.out = dlogits * tr.hid_out.back().transpose();

  Vector dh = params.out.transpose() * dlogits;
  const int stop = horizon > 0 ? std::max(0, steps - horizon) : 0;
  for (int t = steps - 1; t >= stop; --t) {
    const Vector da = dh.cwiseProduct(relu_mask(tr.hid_pre[t]));
    lg.grad.in.noalias() += da * tr.proj_out[t].transpose();
    if (t > 0) lg.grad.rec.noalias() += da * tr.hid_out[t - 1].transpose();
    const Vector dz = (params.in.transpose() * da).cwiseProduct(relu_mask(tr.proj_pre[t]));
    lg.grad.proj.noalias() += dz * sentence[t].transpose();
    dh = params.rec.transpose() * da;
  }
  return lg;
}

ElmanParams glorot_init(const ElmanDims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto fill = [&rng](Eigen::Index rows, Eigen::Index cols) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
    return m;
  };
  ElmanParams p;
  p.proj = fill(dims.projection, dims.input);
  p.in = fill(dims.hidden, dims.projection);
  p.rec = fill(dims.hidden, dims.hidden);
  p.out = fill(dims.classes, dims.hidden);
  return p;
}

ElmanParams bptt_train(std::span<const LabeledSequence> dataset, const TrainConfig& cfg,
                       const ElmanDims& dims, const std::function<void(const EpochStats&)>& on_epoch) {
  return bptt_train(dataset, cfg, glorot_init(dims, cfg.seed), on_epoch);
}

ElmanParams bptt_train(std::span<const LabeledSequence> dataset, const TrainConfig& cfg,
                       ElmanParams params, const std::function<void(const EpochStats&)>& on_epoch) {
  if (!(cfg.learning_rate >= 0.0)) throw ConfigError("learning rate must be non-negative");
  if (cfg.epochs < 1) throw ConfigError("epochs must be at least 1");
  if (cfg.bptt_horizon < 0) throw ConfigError("bptt horizon must be non-negative");
  if (!(cfg.weight_clip > 0.0)) throw ConfigError("weight clip must be positive");
  if (dataset.empty()) throw InputError("training set is empty");
  params.validate();

  const double bound = std::nextafter(cfg.weight_clip, 0.0);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total_loss = 0.0;
    std::size_t correct = 0;
    for (std::size_t idx : order) {
      const LabeledSequence& ex = dataset[idx];
      LossGradient lg = loss_gradient(params, ex.inputs, ex.label, cfg.bptt_horizon);
      if (!std::isfinite(lg.loss) || !lg.grad.all_finite()) {
        throw TrainingDiverged("non-finite loss in epoch " + std::to_string(epoch) +
                               "; the learning rate (" + std::to_string(cfg.learning_rate) +
                               ") is probably too high");
      }
      total_loss += lg.loss;
      params.proj -= cfg.learning_rate * lg.grad.proj;
      params.in -= cfg.learning_rate * lg.grad.in;
      params.rec -= cfg.learning_rate * lg.grad.rec;
      params.out -= cfg.learning_rate * lg.grad.out;
      params.in = params.in.cwiseMax(-bound).cwiseMin(bound);
      params.rec = params.rec.cwiseMax(-bound).cwiseMin(bound);
    }
    if (on_epoch) {
      for (const LabeledSequence& ex : dataset) {
        const ForwardResult fr = forward_sentence(params, ex.inputs, Activation::continuous());
        if (argmax(fr.probabilities) == ex.label) ++correct;
      }
      on_epoch({epoch, total_loss / static_cast<double>(dataset.size()),
                static_cast<double>(correct) / static_cast<double>(dataset.size())});
    }
  }
  return params;
}

double calibrate_activation(const ElmanParams& params, std::span<const LabeledSequence> dataset) {
  double top = -std::numeric_limits<double>::infinity();
  for (const LabeledSequence& ex : dataset) {
    Vector h = Vector::Zero(params.rec.rows());
    for (const Vector& x : ex.inputs) {
      const Vector a = params.in * project(params, x) + params.rec * h;
      top = std::max(top, a.maxCoeff());
      h = a.cwiseMax(0.0);
    }
  }
  return top > 0.0 ? top : 1.0;
}

}  // namespace srnn
