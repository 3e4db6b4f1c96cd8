#include "srnn/error.hpp"
#include "srnn/pipeline.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace srnn;
using namespace srnn::testing;

namespace {

std::vector<LabeledSequence> random_set(std::size_t n, std::mt19937_64& rng, int label = -1) {
  std::vector<LabeledSequence> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sentence s = random_sentence(64, 1 + static_cast<int>(rng() % 5), rng);
    out.push_back({std::move(s), label < 0 ? static_cast<int>(rng() % 6) : label});
  }
  return out;
}

ElmanModel random_model(std::mt19937_64& rng) {
  ElmanModel m;
  m.params = random_params({}, rng, 0.9);
  m.calibration = 1.5;
  return m;
}

// Non-negative model whose spiking run is exact: weights are multiples of
// 1/8, each hidden neuron's incoming weights sum to at most 1 (charge <= T
// per tick), and one-hot words project onto multiples of 1/16 with c = 1.
ElmanModel exact_model(std::mt19937_64& rng) {
  ElmanModel m;
  m.params = ElmanParams::zeros();
  m.calibration = 1.0;
  for (int i = 0; i < 48; ++i)
    for (int k = 0; k < 64; ++k) m.params.proj(i, k) = static_cast<double>(rng() % 17) / 16.0;
  for (int j = 0; j < 16; ++j) {
    int budget = 8;
    while (budget > 0) {
      const int w = 1 + static_cast<int>(rng() % std::min(7, budget));
      const int src = static_cast<int>(rng() % 64);
      double& cell = src < 48 ? m.params.in(j, src) : m.params.rec(j, src - 48);
      if (cell * 8 + w > 7) continue;
      cell += w / 8.0;
      budget -= w;
    }
  }
  m.params.out = random_matrix(6, 16, rng, -2.0, 2.0);
  return m;
}

std::vector<LabeledSequence> one_hot_set(std::size_t n, std::mt19937_64& rng) {
  std::vector<LabeledSequence> out;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledSequence ex;
    const int words = 1 + static_cast<int>(rng() % 5);
    for (int w = 0; w < words; ++w) ex.inputs.push_back(Vector::Unit(64, static_cast<int>(rng() % 64)));
    ex.inputs.push_back(Vector::Zero(64));
    ex.label = static_cast<int>(rng() % 6);
    out.push_back(std::move(ex));
  }
  return out;
}

EvalOptions deterministic_opts() {
  EvalOptions o;
  o.sim.encoder = Encoder::deterministic;
  o.sim.reset = ResetPolicy::per_word;
  return o;
}

}  // namespace

TEST_CASE("setup names and order") {
  CHECK(kAllSetups.size() == 4);
  CHECK(setup_name(kAllSetups[0]) == "FLOAT32_FULL");
  CHECK(setup_name(kAllSetups[1]) == "Q4_WEIGHTS");
  CHECK(setup_name(kAllSetups[2]) == "Q4_WEIGHTS_Q4_HIDDEN");
  CHECK(setup_name(kAllSetups[3]) == "SPIKING");
  CHECK(reference_accuracy(SetupKind::float32_full) == 0.85);
  CHECK(reference_accuracy(SetupKind::q4_weights) == 0.722);
  CHECK(reference_accuracy(SetupKind::q4_weights_q4_hidden) == 0.784);
  CHECK(reference_accuracy(SetupKind::spiking) == 0.74);
}

TEST_CASE("a classifier that is always right scores 1 with a diagonal confusion") {
  std::mt19937_64 rng(51);
  const ElmanModel m = random_model(rng);
  auto test = random_set(60, rng);
  for (auto& ex : test)
    ex.label = static_cast<int>(argmax(forward_sentence(m.params, ex.inputs, Activation::continuous()).probabilities));
  const Artifacts a = Artifacts::convert(m);
  const EvalReport r = evaluate(SetupKind::float32_full, a, test, EvalOptions{});
  CHECK(r.accuracy == 1.0);
  for (int t = 0; t < 6; ++t)
    for (int p = 0; p < 6; ++p)
      if (t != p) CHECK(r.confusion[t][p] == 0);
  CHECK(r.total() == 60);
}

TEST_CASE("all-zero quantized weights predict the first class") {
  std::mt19937_64 rng(52);
  ElmanModel m = random_model(rng);
  m.params.in = random_matrix(16, 48, rng, -0.06, 0.06);  // rounds to 0
  m.params.rec = random_matrix(16, 16, rng, -0.06, 0.06);
  const Artifacts a = Artifacts::convert(m);
  CHECK(a.qnet->q_in.isZero());
  const EvalReport r = evaluate(SetupKind::q4_weights, a, random_set(30, rng), EvalOptions{});
  CHECK(std::all_of(r.predictions.begin(), r.predictions.end(), [](int p) { return p == 0; }));
}

TEST_CASE("spiking and discretized predictions agree where the simulation is exact") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const ElmanModel m = exact_model(rng);
    const auto test = one_hot_set(100, rng);
    const Artifacts a = Artifacts::convert(m);
    CHECK(a.qnet->q_in.minCoeff() >= 0);
    const EvalOptions opts = deterministic_opts();
    const EvalReport q4 = evaluate(SetupKind::q4_weights_q4_hidden, a, test, opts);
    const EvalReport spk = evaluate(SetupKind::spiking, a, test, opts);
    CHECK(q4.predictions == spk.predictions);
    // Stronger: the decoded EOS state equals the discretized hidden state.
    int active = 0;
    for (const auto& ex : test) {
      const auto fwd = forward_sentence(dequantized_params(*a.qnet), ex.inputs, Activation::quantized(1.0));
      CHECK(run_spiking(a, ex.inputs, opts.sim).hidden == fwd.hidden.back());
      active += fwd.hidden.back().any();
    }
    CHECK(active > 50);
  }
}

TEST_CASE("the spiking class depends only on the EOS-window counts") {
  std::mt19937_64 rng(54);
  const Artifacts a = Artifacts::convert(random_model(rng));
  for (const auto& ex : random_set(20, rng)) {
    SimOptions sim;
    sim.seed = rng();
    const SpikingOutcome o = run_spiking(a, ex.inputs, sim);
    const Vector h = decode_counts(o.run.counts.back(), a.qnet->calibration);
    CHECK(o.probabilities == softmax(a.qnet->out * h));
    CHECK(predict(SetupKind::spiking, a, ex.inputs, sim) == static_cast<int>(argmax(o.probabilities)));
  }
}

TEST_CASE("reports are consistent with their predictions") {
  std::mt19937_64 rng(55);
  const ElmanModel m = random_model(rng);
  const auto test = random_set(80, rng);
  EvalOptions opts;
  opts.repeats = 3;
  const Comparison cmp = compare_all(m, test, opts);
  for (const EvalReport& r : cmp.reports) {
    long correct = 0;
    long trace = 0;
    std::vector<long> per_class(6, 0);
    for (std::size_t i = 0; i < test.size(); ++i) {
      correct += r.predictions[i] == test[i].label;
      ++per_class[test[i].label];
    }
    for (int t = 0; t < 6; ++t) {
      long row = 0;
      for (long v : r.confusion[t]) {
        CHECK(v >= 0);
        row += v;
      }
      CHECK(row == per_class[t]);
      trace += r.confusion[t][t];
    }
    CHECK(r.accuracy == static_cast<double>(correct) / test.size());
    CHECK(trace == correct);
    CHECK(r.total() == static_cast<long>(test.size()));
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);
    CHECK(r.repeat_accuracies.size() == (r.setup == SetupKind::spiking ? 3u : 1u));
    CHECK(r.repeat_accuracies[0] == r.accuracy);
  }
}

TEST_CASE("comparison is deterministic and independent of threading") {
  std::mt19937_64 rng(56);
  const ElmanModel m = random_model(rng);
  const auto test = random_set(50, rng);
  EvalOptions one;
  one.threads = 1;
  one.sim.seed = 99;
  EvalOptions four = one;
  four.threads = 4;
  const Comparison a = compare_all(m, test, one);
  const Comparison b = compare_all(m, test, four);
  CHECK(comparison_table(a) == comparison_table(b));
  CHECK(comparison_json(a) == comparison_json(b));
  for (int k = 0; k < 4; ++k) CHECK(a.reports[k].predictions == b.reports[k].predictions);
  CHECK(comparison_table(compare_all(m, test, one)) == comparison_table(a));
}

TEST_CASE("report formats") {
  std::mt19937_64 rng(57);
  const Comparison cmp = compare_all(random_model(rng), random_set(10, rng), EvalOptions{});
  const std::string table = comparison_table(cmp);
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  CHECK(table.rfind("setup\tdescription\taccuracy\tdelta_vs_float\treference\n", 0) == 0);
  CHECK(table.find("SPIKING\t") != std::string::npos);
  const std::string csv = confusion_csv(cmp.reports[0]);
  CHECK(csv.rfind("true\\predicted,ABBR,DESC,NUM,ENTY,HUM,LOC\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("setup and artifact mismatches are configuration errors") {
  std::mt19937_64 rng(58);
  const ElmanModel m = random_model(rng);
  const auto test = random_set(5, rng);
  Artifacts bare;
  bare.model = m;
  CHECK_NOTHROW(evaluate(SetupKind::float32_full, bare, test, EvalOptions{}));
  CHECK_THROWS_AS(evaluate(SetupKind::q4_weights, bare, test, EvalOptions{}), ConfigError);
  Artifacts no_core = Artifacts::convert(m);
  no_core.core.reset();
  CHECK_THROWS_AS(evaluate(SetupKind::spiking, no_core, test, EvalOptions{}), ConfigError);
  Artifacts small = Artifacts::convert(m);
  small.core = build_core([&] {
    QuantizedNet q = *small.qnet;
    q.q_in = IntMatrix::Zero(16, 40);
    return q;
  }());
  CHECK_THROWS_AS(evaluate(SetupKind::spiking, small, test, EvalOptions{}), ConfigError);
  EvalOptions zero;
  zero.repeats = 0;
  CHECK_THROWS_AS(evaluate(SetupKind::float32_full, bare, test, zero), ConfigError);
  auto bad = test;
  bad[0].label = 6;
  CHECK_THROWS_AS(evaluate(SetupKind::float32_full, bare, bad, EvalOptions{}), InputError);
}
