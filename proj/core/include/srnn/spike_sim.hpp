#pragma once

// Tick-accurate simulation of the mapped recurrent layer.
//
// Each word is presented for one window of 16 ticks. Hidden-layer spikes are
// fed back through axon rows with a 15-tick delay plus one tick of
// transmission, so a spike fired at tick t reaches its targets at t + 16,
// i.e. at the same phase of the next word window.

#include "srnn/elman.hpp"
#include "srnn/hw_model.hpp"

#include <bitset>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace srnn {

inline constexpr int kWordWindow = 16;

/// Bit t set = spike at tick t of the word window.
using SpikeTrain = std::bitset<kWordWindow>;
/// One spike train per external input of the core.
using EncodedWord = std::vector<SpikeTrain>;

enum class Encoder { deterministic, poisson };
enum class ResetPolicy { per_sentence, per_word };

struct SimOptions {
  Encoder encoder = Encoder::poisson;
  std::uint64_t seed = 0;
  /// per_sentence clears membranes and in-flight feedback before a sentence.
  /// per_word additionally clears membranes (only) at every word boundary.
  ResetPolicy reset = ResetPolicy::per_sentence;
  int window = kWordWindow;
  int delay = kMaxDelay;

  /// Throws ConfigError unless window == delay + 1 and both are in range.
  void validate() const;
};

/// Spike count representing activation p: clamp(round(window p / cal_in), 0, window).
int target_count(double p, double cal_in, int window = kWordWindow);

/// Exactly `count` spikes spread evenly over the window, front-loaded:
/// tick t spikes iff ceil((t+1) n / w) > ceil(t n / w).
SpikeTrain even_train(int count, int window = kWordWindow);

/// Rate-codes projection activations. The generator is only consumed in
/// Poisson mode (one Bernoulli draw with p = n / window per tick and input).
/// Throws InputError on negative activations.
EncodedWord encode_word(const Vector& p, double cal_in, const SimOptions& opts, std::mt19937_64& rng);

/// All-zero encoding of the end-of-sentence word.
EncodedWord silent_word(int inputs);

struct NeuronState {
  long v = 0;
};

/// One tick for every used neuron: integrate the arriving axon rows, clamp
/// the membrane at zero, then emit at most one spike when V >= T, subtracting T.
std::bitset<kCoreNeurons> tick(const CoreConfig& core, std::span<NeuronState> states,
                               const std::bitset<kCoreAxons>& arriving);

struct SpikeEvent {
  long tick = 0;
  int neuron = 0;
  friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

/// Ordered by tick, then neuron id.
using SpikeRaster = std::vector<SpikeEvent>;

struct SentenceRun {
  /// counts[w][j]: spikes of hidden neuron j during word window w.
  std::vector<std::vector<int>> counts;
  SpikeRaster raster;
};

/// Runs a whole sentence from a cleared core. The final word must be silent
/// (EOS). Throws ConfigError on inconsistent options or core delays and
/// InputError on malformed word encodings.
SentenceRun run_sentence(const CoreConfig& core, std::span<const EncodedWord> words,
                         const SimOptions& opts);

/// c * counts / window.
Vector decode_counts(std::span<const int> counts, double calibration, int window = kWordWindow);

/// "tick,neuron_id" per line.
void write_raster(std::ostream& out, const SpikeRaster& raster);
/// One line per word, comma-separated counts.
void write_counts(std::ostream& out, const std::vector<std::vector<int>>& counts);
SpikeRaster read_raster(std::istream& in);

}  // namespace srnn
