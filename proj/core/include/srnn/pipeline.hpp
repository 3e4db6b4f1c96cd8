#pragma once

// Four-way comparison of the trained network against its discretized and
// spiking conversions on a labeled test set.

#include "srnn/hw_model.hpp"
#include "srnn/model.hpp"
#include "srnn/quantizer.hpp"
#include "srnn/spike_sim.hpp"
#include "srnn/train.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srnn {

enum class SetupKind { float32_full, q4_weights, q4_weights_q4_hidden, spiking };

inline constexpr std::array<SetupKind, 4> kAllSetups = {
    SetupKind::float32_full, SetupKind::q4_weights, SetupKind::q4_weights_q4_hidden, SetupKind::spiking};

std::string_view setup_name(SetupKind setup);         // e.g. "Q4_WEIGHTS"
std::string_view setup_description(SetupKind setup);  // human-readable row label
/// Published accuracy of each configuration on the original word vectors,
/// shown next to our numbers for orientation.
double reference_accuracy(SetupKind setup);

struct Artifacts {
  ElmanModel model;
  std::optional<QuantizedNet> qnet;
  std::optional<CoreConfig> core;

  /// Quantizes the model and maps it onto a core with threshold 8.
  static Artifacts convert(const ElmanModel& model);
};

struct EvalOptions {
  SimOptions sim;
  /// Extra independent passes of a stochastic setup; only their accuracies are kept.
  int repeats = 1;
  /// 0 = std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct EvalReport {
  SetupKind setup = SetupKind::float32_full;
  double accuracy = 0.0;
  /// confusion[true][predicted]
  std::vector<std::vector<long>> confusion;
  std::vector<int> predictions;
  std::vector<double> repeat_accuracies;
  std::uint64_t seed = 0;
  Encoder encoder = Encoder::poisson;
  ResetPolicy reset = ResetPolicy::per_sentence;

  long total() const;
};

/// Spiking run of one sentence, with the decoded EOS-window state.
struct SpikingOutcome {
  SentenceRun run;
  Vector hidden;
  Vector probabilities;
};

/// Encodes the projection of every word, simulates the core and classifies
/// the EOS-window spike counts. `opts.seed` is used as given.
SpikingOutcome run_spiking(const Artifacts& artifacts, std::span<const Vector> sentence,
                           const SimOptions& opts);

/// Predicted class of one sentence. For the spiking setup `opts.seed` is used as given.
int predict(SetupKind setup, const Artifacts& artifacts, std::span<const Vector> sentence,
            const SimOptions& opts);

/// Sentence i of the test set is simulated with seed opts.sim.seed ^ i.
/// Throws ConfigError when the artifacts do not support the setup.
EvalReport evaluate(SetupKind setup, const Artifacts& artifacts,
                    std::span<const LabeledSequence> test, const EvalOptions& opts);

struct Comparison {
  std::array<EvalReport, 4> reports;
  std::size_t test_size = 0;
};

Comparison compare_all(const ElmanModel& model, std::span<const LabeledSequence> test,
                       const EvalOptions& opts);

/// Tab-separated: setup, description, accuracy, delta vs FLOAT32_FULL, reference.
std::string comparison_table(const Comparison& cmp);
/// JSON summary of all reports.
std::string comparison_json(const Comparison& cmp);
/// Header row of predicted classes, then one row per true class.
std::string confusion_csv(const EvalReport& report);

}  // namespace srnn
