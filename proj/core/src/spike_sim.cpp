#include "srnn/spike_sim.hpp"

#include "srnn/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace srnn {

void SimOptions::validate() const {
  if (delay < 0 || delay > kMaxDelay) throw ConfigError("delay must be in [0, 15]");
  if (window != delay + 1)
    throw ConfigError("word window (" + std::to_string(window) + ") must equal delay + 1 (" +
                      std::to_string(delay + 1) + ")");
}

int target_count(double p, double cal_in, int window) {
  if (!(cal_in > 0.0)) throw ConfigError("input calibration must be positive");
  if (!(p >= 0.0)) throw InputError("activation must be non-negative");
  const double n = std::round(window * p / cal_in);
  return static_cast<int>(std::clamp(n, 0.0, double(window)));
}

SpikeTrain even_train(int count, int window) {
  SpikeTrain train;
  auto ceil_div = [window](int a) { return (a + window - 1) / window; };
  for (int t = 0; t < window; ++t)
    if (ceil_div((t + 1) * count) > ceil_div(t * count)) train.set(t);
  return train;
}

EncodedWord encode_word(const Vector& p, double cal_in, const SimOptions& opts, std::mt19937_64& rng) {
  EncodedWord word(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0)) throw InputError("projection activation " + std::to_string(i) + " is negative");
    const int n = target_count(p[i], cal_in, opts.window);
    if (opts.encoder == Encoder::deterministic) {
      word[i] = even_train(n, opts.window);
      continue;
    }
    const double prob = static_cast<double>(n) / opts.window;
    for (int t = 0; t < opts.window; ++t) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < prob) word[i].set(t);
    }
  }
  return word;
}

EncodedWord silent_word(int inputs) { return EncodedWord(static_cast<std::size_t>(inputs)); }

std::bitset<kCoreNeurons> tick(const CoreConfig& core, std::span<NeuronState> states,
                               const std::bitset<kCoreAxons>& arriving) {
  const int n = std::min<int>(core.hidden, static_cast<int>(states.size()));
  for (int i = 0; i < kCoreAxons; ++i) {
    if (!arriving[i]) continue;
    const auto& row = core.connectivity[i];
    const int g = core.axons[i].type;
    for (int j = 0; j < n; ++j)
      if (row[j]) states[j].v += g;
  }
  std::bitset<kCoreNeurons> fired;
  for (int j = 0; j < n; ++j) {
    long& v = states[j].v;
    if (v < 0) v = 0;
    if (v >= core.threshold) {
      v -= core.threshold;
      fired.set(j);
    }
  }
  return fired;
}

SentenceRun run_sentence(const CoreConfig& core, std::span<const EncodedWord> words,
                         const SimOptions& opts) {
  opts.validate();
  if (words.empty()) throw InputError("a sentence needs at least the EOS word");
  for (int i = 0; i < core.axons_used(); ++i) {
    const AxonRow& a = core.axons[i];
    if (a.source.kind == SourceKind::recurrent && a.delay != opts.delay)
      throw ConfigError("feedback axon " + std::to_string(i) + " has delay " + std::to_string(a.delay) +
                        ", simulation expects " + std::to_string(opts.delay));
  }
  const SpikeTrain window_mask = opts.window == kWordWindow
                                     ? SpikeTrain().set()
                                     : SpikeTrain((1ULL << opts.window) - 1);
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (static_cast<int>(words[w].size()) != core.inputs)
      throw InputError("word " + std::to_string(w) + " has " + std::to_string(words[w].size()) +
                       " trains, core expects " + std::to_string(core.inputs));
    for (const SpikeTrain& s : words[w])
      if ((s & ~window_mask).any()) throw InputError("spike outside the word window");
  }
  if (std::any_of(words.back().begin(), words.back().end(), [](const SpikeTrain& s) { return s.any(); }))
    throw InputError("the final word must be the silent EOS encoding");

  // Ring of pending axon deliveries, indexed by absolute tick.
  const int ring = kMaxDelay + 2;
  std::vector<std::bitset<kCoreAxons>> pending(ring);
  std::vector<NeuronState> states(static_cast<std::size_t>(core.hidden));

  SentenceRun run;
  run.counts.assign(words.size(), std::vector<int>(static_cast<std::size_t>(core.hidden), 0));

  for (std::size_t w = 0; w < words.size(); ++w) {
    if (opts.reset == ResetPolicy::per_word)
      std::fill(states.begin(), states.end(), NeuronState{});
    for (int t = 0; t < opts.window; ++t) {
      const long now = static_cast<long>(w) * opts.window + t;
      for (int i = 0; i < core.inputs; ++i) {
        if (!words[w][i][t]) continue;
        const int row = core.first_row(SourceKind::input, i);
        for (int k = 0; k < kAxonsPerInput; ++k)
          pending[(now + core.axons[row + k].delay) % ring].set(row + k);
      }
      const std::bitset<kCoreAxons> arriving = pending[now % ring];
      pending[now % ring].reset();

      const auto fired = tick(core, states, arriving);
      for (int j = 0; j < core.hidden; ++j) {
        if (!fired[j]) continue;
        ++run.counts[w][j];
        run.raster.push_back({now, j});
        const int row = core.first_row(SourceKind::recurrent, j);
        for (int k = 0; k < kAxonsPerInput; ++k)
          pending[(now + core.axons[row + k].delay + 1) % ring].set(row + k);
      }
    }
  }
  return run;
}

Vector decode_counts(std::span<const int> counts, double calibration, int window) {
  if (!(calibration > 0.0)) throw ConfigError("calibration must be positive");
  Vector h(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] < 0 || counts[j] > window)
      throw RangeError("spike count " + std::to_string(counts[j]) + " outside [0, " +
                       std::to_string(window) + "]");
    h[static_cast<Eigen::Index>(j)] = calibration * counts[j] / window;
  }
  return h;
}

void write_raster(std::ostream& out, const SpikeRaster& raster) {
  for (const SpikeEvent& e : raster) out << e.tick << ',' << e.neuron << '\n';
}

void write_counts(std::ostream& out, const std::vector<std::vector<int>>& counts) {
  for (const auto& word : counts) {
    for (std::size_t j = 0; j < word.size(); ++j) out << (j ? "," : "") << word[j];
    out << '\n';
  }
}

SpikeRaster read_raster(std::istream& in) {
  SpikeRaster raster;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected 'tick,neuron_id'", lineno);
    try {
      raster.push_back({std::stol(line.substr(0, comma)), std::stoi(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw ParseError("expected integers 'tick,neuron_id'", lineno);
    }
  }
  return raster;
}

}  // namespace srnn
