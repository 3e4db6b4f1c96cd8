#include "srnn/error.hpp"
#include "srnn/train.hpp"
#include "support/oracles.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace srnn;
using namespace srnn::testing;

TEST_CASE("BPTT gradient matches central finite differences") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    ElmanParams p = random_params({}, rng, 0.4);
    const Sentence s = random_sentence(64, 3, rng);
    const int label = static_cast<int>(rng() % 6);
    const LossGradient lg = loss_gradient(p, s, label);
    CHECK(lg.loss == doctest::Approx(unrolled_loss(p, s, label)).epsilon(1e-12));
    auto loss = [&] { return unrolled_loss(p, s, label); };
    CHECK(max_relative_error(lg.grad.out, finite_difference(p.out, loss, 1e-5)) <= 1e-4);
    CHECK(max_relative_error(lg.grad.rec, finite_difference(p.rec, loss, 1e-5)) <= 1e-4);
    CHECK(max_relative_error(lg.grad.in, finite_difference(p.in, loss, 1e-5)) <= 1e-4);
    CHECK(max_relative_error(lg.grad.proj, finite_difference(p.proj, loss, 1e-5)) <= 1e-4);
  }
}

TEST_CASE("truncated BPTT only sees the last steps") {
  std::mt19937_64 rng(22);
  const ElmanParams p = random_params({}, rng);
  const Sentence s = random_sentence(64, 3, rng);
  // Horizon 1 covers only the EOS step: zero input, so no projection gradient,
  // and the recurrent gradient uses the state before EOS.
  const LossGradient one = loss_gradient(p, s, 2, 1);
  CHECK(one.grad.proj.isZero(0.0));
  const LossGradient full = loss_gradient(p, s, 2, 0);
  const LossGradient wide = loss_gradient(p, s, 2, 100);
  CHECK(full.grad == wide.grad);
  CHECK(one.grad.out == full.grad.out);
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
  const auto data = first_dimension_task(20, 3);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 2;
  cfg.seed = 9;
  const ElmanParams init = glorot_init({}, cfg.seed);
  CHECK(bptt_train(data, cfg) == init);
}

TEST_CASE("training is deterministic in the seed") {
  const auto data = first_dimension_task(40, 4);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.seed = 5;
  CHECK(bptt_train(data, cfg) == bptt_train(data, cfg));
  TrainConfig other = cfg;
  other.seed = 6;
  CHECK_FALSE(bptt_train(data, cfg) == bptt_train(data, other));
}

TEST_CASE("recurrent weights stay inside the clip interval") {
  const auto data = first_dimension_task(100, 5);
  TrainConfig cfg;
  cfg.learning_rate = 0.5;
  cfg.epochs = 3;
  cfg.weight_clip = 0.25;
  const ElmanParams p = bptt_train(data, cfg);
  CHECK(p.in.cwiseAbs().maxCoeff() < 0.25);
  CHECK(p.rec.cwiseAbs().maxCoeff() < 0.25);
}

TEST_CASE("learns the first-dimension task") {
  const auto data = first_dimension_task(500, 6);
  TrainConfig cfg;
  cfg.learning_rate = 0.02;
  cfg.epochs = 50;
  cfg.seed = 7;
  double loss_first = 0.0;
  double loss_last = 0.0;
  double acc_last = 0.0;
  bptt_train(data, cfg, ElmanDims{}, [&](const EpochStats& s) {
    if (s.epoch == 1) loss_first = s.mean_loss;
    loss_last = s.mean_loss;
    acc_last = s.accuracy;
  });
  MESSAGE("train accuracy after 50 epochs: " << acc_last);
  CHECK(loss_last < loss_first);
  CHECK(acc_last >= 0.95);
}

TEST_CASE("divergence is reported") {
  const auto data = first_dimension_task(50, 8);
  TrainConfig cfg;
  cfg.learning_rate = 1e300;
  cfg.epochs = 5;
  CHECK_THROWS_AS(bptt_train(data, cfg), TrainingDiverged);
}

TEST_CASE("configuration errors") {
  const auto data = first_dimension_task(5, 9);
  TrainConfig cfg;
  cfg.epochs = 0;
  CHECK_THROWS_AS(bptt_train(data, cfg), ConfigError);
  cfg = {};
  cfg.learning_rate = -1.0;
  CHECK_THROWS_AS(bptt_train(data, cfg), ConfigError);
  CHECK_THROWS_AS(bptt_train(std::vector<LabeledSequence>{}, TrainConfig{}), InputError);
  CHECK_THROWS_AS(loss_gradient(ElmanParams::zeros(), data[0].inputs, 6), InputError);
}

TEST_CASE("calibration is the largest hidden pre-activation") {
  std::mt19937_64 rng(23);
  const ElmanParams p = random_params({}, rng);
  const auto data = first_dimension_task(30, 10);
  double expected = -1e300;
  for (const auto& ex : data) {
    Vector h = Vector::Zero(16);
    for (const Vector& x : ex.inputs) {
      const Vector a = p.in * (p.proj * x).cwiseMax(0.0) + p.rec * h;
      expected = std::max(expected, a.maxCoeff());
      h = a.cwiseMax(0.0);
    }
  }
  CHECK(calibrate_activation(p, data) == expected);
  CHECK(calibrate_activation(ElmanParams::zeros(), data) == 1.0);
}
