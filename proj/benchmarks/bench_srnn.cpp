#include "srnn/hw_model.hpp"
#include "srnn/spike_sim.hpp"
#include "srnn/train.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace srnn;

namespace {

Matrix uniform(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  return m;
}

QuantizedNet random_qnet(std::mt19937_64& rng) {
  QuantizedNet q;
  std::uniform_int_distribution<int> w(kWeightMin, kWeightMax);
  q.q_in = IntMatrix::NullaryExpr(16, 48, [&] { return w(rng); });
  q.q_rec = IntMatrix::NullaryExpr(16, 16, [&] { return w(rng); });
  q.proj = Matrix::Zero(48, 64);
  q.out = Matrix::Zero(6, 16);
  return q;
}

Sentence random_sentence(int words, std::mt19937_64& rng) {
  Sentence s;
  for (int w = 0; w < words; ++w) s.push_back(uniform(64, 1, rng, -1.0, 1.0));
  s.push_back(Vector::Zero(64));
  return s;
}

void BM_Tick(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const CoreConfig core = build_core(random_qnet(rng));
  std::vector<NeuronState> v(16);
  std::bitset<kCoreAxons> arriving;
  for (int i = 0; i < kCoreAxons; i += 2) arriving.set(i);
  for (auto _ : state) benchmark::DoNotOptimize(tick(core, v, arriving));
}
BENCHMARK(BM_Tick);

void BM_RunSentence(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const CoreConfig core = build_core(random_qnet(rng));
  SimOptions opts;
  std::vector<EncodedWord> words;
  for (int w = 0; w < state.range(0); ++w) words.push_back(encode_word(uniform(48, 1, rng, 0.0, 1.0), 1.0, opts, rng));
  words.push_back(silent_word(48));
  for (auto _ : state) benchmark::DoNotOptimize(run_sentence(core, words, opts));
  state.SetItemsProcessed(state.iterations() * (state.range(0) + 1) * kWordWindow);
}
BENCHMARK(BM_RunSentence)->Arg(5)->Arg(20);

void BM_ForwardSentence(benchmark::State& state) {
  std::mt19937_64 rng(3);
  ElmanParams p{uniform(48, 64, rng, -0.5, 0.5), uniform(16, 48, rng, -0.5, 0.5), uniform(16, 16, rng, -0.5, 0.5),
                uniform(6, 16, rng, -0.5, 0.5)};
  const Sentence s = random_sentence(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(forward_sentence(p, s, Activation::continuous()));
}
BENCHMARK(BM_ForwardSentence)->Arg(10);

void BM_LossGradient(benchmark::State& state) {
  std::mt19937_64 rng(4);
  ElmanParams p{uniform(48, 64, rng, -0.5, 0.5), uniform(16, 48, rng, -0.5, 0.5), uniform(16, 16, rng, -0.5, 0.5),
                uniform(6, 16, rng, -0.5, 0.5)};
  const Sentence s = random_sentence(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(loss_gradient(p, s, 3));
}
BENCHMARK(BM_LossGradient)->Arg(10);

void BM_BuildCore(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const QuantizedNet q = random_qnet(rng);
  for (auto _ : state) benchmark::DoNotOptimize(build_core(q));
}
BENCHMARK(BM_BuildCore);

}  // namespace

BENCHMARK_MAIN();
