#include "srnn/pipeline.hpp"

#include "srnn/error.hpp"
#include "srnn/nlp_data.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

namespace srnn {

std::string_view setup_name(SetupKind setup) {
  switch (setup) {
    case SetupKind::float32_full: return "FLOAT32_FULL";
    case SetupKind::q4_weights: return "Q4_WEIGHTS";
    case SetupKind::q4_weights_q4_hidden: return "Q4_WEIGHTS_Q4_HIDDEN";
    case SetupKind::spiking: return "SPIKING";
  }
  return "?";
}

std::string_view setup_description(SetupKind setup) {
  switch (setup) {
    case SetupKind::float32_full: return "ReLUs, 32bit weights, 32bit hidden state";
    case SetupKind::q4_weights: return "ReLUs, scaled 4bit weights, 32bit hidden state";
    case SetupKind::q4_weights_q4_hidden: return "ReLUs, scaled 4bit weights, 4bit hidden state";
    case SetupKind::spiking: return "spiking neurons, scaled 4bit weights, 4bit spiking hidden state";
  }
  return "?";
}

double reference_accuracy(SetupKind setup) {
  switch (setup) {
    case SetupKind::float32_full: return 0.85;
    case SetupKind::q4_weights: return 0.722;
    case SetupKind::q4_weights_q4_hidden: return 0.784;
    case SetupKind::spiking: return 0.74;
  }
  return 0.0;
}

Artifacts Artifacts::convert(const ElmanModel& model) {
  Artifacts a;
  a.model = model;
  a.qnet = quantize_weights(model);
  a.core = build_core(*a.qnet, static_cast<int>(kWeightScale));
  return a;
}

long EvalReport::total() const {
  long n = 0;
  for (const auto& row : confusion)
    for (long v : row) n += v;
  return n;
}

namespace {

void require_artifacts(SetupKind setup, const Artifacts& a) {
  a.model.params.validate();
  if (setup == SetupKind::float32_full) return;
  if (!a.qnet) throw ConfigError(std::string(setup_name(setup)) + " needs a quantized network");
  if (a.qnet->hidden() != a.model.params.in.rows() || a.qnet->inputs() != a.model.params.in.cols())
    throw ConfigError("quantized network does not match the model dimensions");
  if (setup != SetupKind::spiking) return;
  if (!a.core) throw ConfigError("SPIKING needs a core configuration");
  if (a.core->inputs != a.qnet->inputs() || a.core->hidden != a.qnet->hidden())
    throw ConfigError("core configuration does not match the quantized network");
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t sentence_seed(std::uint64_t base, std::size_t index, int repeat) {
  return base ^ static_cast<std::uint64_t>(index) ^ (static_cast<std::uint64_t>(repeat) << 40);
}

}  // namespace

SpikingOutcome run_spiking(const Artifacts& artifacts, std::span<const Vector> sentence,
                           const SimOptions& opts) {
  require_artifacts(SetupKind::spiking, artifacts);
  if (sentence.empty()) throw InputError("sentence must contain at least the EOS vector");
  const QuantizedNet& q = *artifacts.qnet;
  const ElmanParams& params = artifacts.model.params;
  std::mt19937_64 rng(opts.seed);
  std::vector<EncodedWord> words;
  words.reserve(sentence.size());
  for (const Vector& x : sentence) words.push_back(encode_word(project(params, x), q.calibration, opts, rng));

  SpikingOutcome out;
  out.run = run_sentence(*artifacts.core, words, opts);
  out.hidden = decode_counts(out.run.counts.back(), q.calibration, opts.window);
  out.probabilities = softmax(q.out * out.hidden);
  return out;
}

int predict(SetupKind setup, const Artifacts& artifacts, std::span<const Vector> sentence,
            const SimOptions& opts) {
  switch (setup) {
    case SetupKind::float32_full:
      return static_cast<int>(
          argmax(forward_sentence(artifacts.model.params, sentence, Activation::continuous()).probabilities));
    case SetupKind::q4_weights:
      return static_cast<int>(argmax(
          forward_sentence(dequantized_params(*artifacts.qnet), sentence, Activation::continuous())
              .probabilities));
    case SetupKind::q4_weights_q4_hidden:
      return static_cast<int>(argmax(forward_sentence(dequantized_params(*artifacts.qnet), sentence,
                                                      Activation::quantized(artifacts.qnet->calibration))
                                         .probabilities));
    case SetupKind::spiking:
      return static_cast<int>(argmax(run_spiking(artifacts, sentence, opts).probabilities));
  }
  throw ConfigError("unknown setup");
}

EvalReport evaluate(SetupKind setup, const Artifacts& artifacts, std::span<const LabeledSequence> test,
                    const EvalOptions& opts) {
  require_artifacts(setup, artifacts);
  opts.sim.validate();
  if (opts.repeats < 1) throw ConfigError("repeats must be at least 1");
  const auto classes = static_cast<std::size_t>(artifacts.model.params.out.rows());
  for (const LabeledSequence& ex : test)
    if (ex.label < 0 || static_cast<std::size_t>(ex.label) >= classes)
      throw InputError("test label outside the class range");

  const bool quantized_weights = setup == SetupKind::q4_weights || setup == SetupKind::q4_weights_q4_hidden;
  const ElmanParams params = quantized_weights ? dequantized_params(*artifacts.qnet) : artifacts.model.params;
  const Activation act = setup == SetupKind::q4_weights_q4_hidden
                             ? Activation::quantized(artifacts.qnet->calibration)
                             : Activation::continuous();
  auto predict_one = [&](std::size_t i, int repeat) -> int {
    const LabeledSequence& ex = test[i];
    if (setup == SetupKind::spiking) {
      SimOptions sim = opts.sim;
      sim.seed = sentence_seed(opts.sim.seed, i, repeat);
      return predict(setup, artifacts, ex.inputs, sim);
    }
    return static_cast<int>(argmax(forward_sentence(params, ex.inputs, act).probabilities));
  };

  const bool stochastic = setup == SetupKind::spiking && opts.sim.encoder == Encoder::poisson;
  const int passes = stochastic ? opts.repeats : 1;

  EvalReport report;
  report.setup = setup;
  report.seed = opts.sim.seed;
  report.encoder = opts.sim.encoder;
  report.reset = opts.sim.reset;
  report.confusion.assign(classes, std::vector<long>(classes, 0));

  for (int r = 0; r < passes; ++r) {
    std::vector<int> pred(test.size(), -1);
    parallel_for(test.size(), opts.threads, [&](std::size_t i) { pred[i] = predict_one(i, r); });
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i) correct += pred[i] == test[i].label;
    const double acc = test.empty() ? 0.0 : static_cast<double>(correct) / test.size();
    report.repeat_accuracies.push_back(acc);
    if (r == 0) {
      report.predictions = std::move(pred);
      report.accuracy = acc;
      for (std::size_t i = 0; i < test.size(); ++i) ++report.confusion[test[i].label][report.predictions[i]];
    }
  }
  return report;
}

Comparison compare_all(const ElmanModel& model, std::span<const LabeledSequence> test,
                       const EvalOptions& opts) {
  const Artifacts artifacts = Artifacts::convert(model);
  Comparison cmp;
  cmp.test_size = test.size();
  for (std::size_t k = 0; k < kAllSetups.size(); ++k)
    cmp.reports[k] = evaluate(kAllSetups[k], artifacts, test, opts);
  return cmp;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string_view encoder_name(Encoder e) { return e == Encoder::poisson ? "poisson" : "deterministic"; }
std::string_view reset_name(ResetPolicy r) { return r == ResetPolicy::per_word ? "per-word" : "per-sentence"; }

}  // namespace

std::string comparison_table(const Comparison& cmp) {
  std::ostringstream s;
  s << "setup\tdescription\taccuracy\tdelta_vs_float\treference\n";
  const double base = cmp.reports[0].accuracy;
  for (const EvalReport& r : cmp.reports) {
    s << setup_name(r.setup) << '\t' << setup_description(r.setup) << '\t' << fixed(r.accuracy, 4) << '\t'
      << fixed(r.accuracy - base, 4) << '\t' << fixed(reference_accuracy(r.setup), 3) << '\n';
  }
  return s.str();
}

std::string comparison_json(const Comparison& cmp) {
  nlohmann::json j;
  j["test_size"] = cmp.test_size;
  j["setups"] = nlohmann::json::array();
  for (const EvalReport& r : cmp.reports) {
    nlohmann::json e;
    e["setup"] = setup_name(r.setup);
    e["description"] = setup_description(r.setup);
    e["accuracy"] = r.accuracy;
    e["reference_accuracy"] = reference_accuracy(r.setup);
    e["confusion"] = r.confusion;
    e["repeat_accuracies"] = r.repeat_accuracies;
    e["seed"] = r.seed;
    e["encoder"] = encoder_name(r.encoder);
    e["reset"] = reset_name(r.reset);
    j["setups"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string confusion_csv(const EvalReport& report) {
  std::ostringstream s;
  const std::size_t n = report.confusion.size();
  auto name = [n](std::size_t k) {
    return n == static_cast<std::size_t>(kNumClasses) ? std::string(class_name(static_cast<int>(k)))
                                                      : std::to_string(k);
  };
  s << "true\\predicted";
  for (std::size_t k = 0; k < n; ++k) s << ',' << name(k);
  s << '\n';
  for (std::size_t t = 0; t < n; ++t) {
    s << name(t);
    for (long v : report.confusion[t]) s << ',' << v;
    s << '\n';
  }
  return s.str();
}

}  // namespace srnn
