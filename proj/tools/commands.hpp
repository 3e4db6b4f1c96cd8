#pragma once

// Subcommands of the srnn tool. Each returns a process exit code and
// reports failures as a single diagnostic line on `err`.

#include "srnn/nlp_data.hpp"
#include "srnn/pipeline.hpp"
#include "srnn/spike_sim.hpp"
#include "srnn/train.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace srnn::cli {

namespace fs = std::filesystem;

struct EmbeddingArgs {
  std::optional<fs::path> vectors;   // word vector text file
  std::uint64_t fallback_seed = 1;   // used when no vector file is given
  std::vector<fs::path> vocab;       // extra corpora whose tokens get fallback vectors
};

struct SimArgs {
  std::string encoder = "poisson";   // poisson | deterministic
  std::uint64_t seed = 0;
  std::string reset = "per-sentence";  // per-sentence | per-word
};

struct TrainArgs {
  fs::path train_corpus;
  fs::path out;
  EmbeddingArgs embedding;
  TrainConfig config;
  bool verbose = false;
};

struct ConvertArgs {
  fs::path model;
  fs::path core_out;
  std::optional<fs::path> quantized_out;
  int threshold = 8;
};

struct EvaluateArgs {
  fs::path model;
  fs::path test_corpus;
  fs::path out_dir;
  EmbeddingArgs embedding;
  SimArgs sim;
  int repeats = 1;
  unsigned threads = 0;
};

struct SimulateArgs {
  fs::path model;
  std::optional<fs::path> core;
  std::string text;
  EmbeddingArgs embedding;
  SimArgs sim;
  std::optional<fs::path> raster_out;
  std::optional<fs::path> counts_out;
};

struct PowerArgs {
  long cores = 1;
};

struct ReplArgs {
  fs::path model;
  std::optional<fs::path> core;
  EmbeddingArgs embedding;
  SimArgs sim;
  fs::path raster_out = "raster.csv";
  bool ascii = true;
};

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_convert(const ConvertArgs& args, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_power(const PowerArgs& args, std::ostream& out, std::ostream& err);
int cmd_repl(const ReplArgs& args, std::istream& in, std::ostream& out, std::ostream& err);

SimOptions to_sim_options(const SimArgs& args);
WordVectorTable make_table(const EmbeddingArgs& args, const std::vector<fs::path>& default_vocab,
                           std::ostream& err);
std::vector<LabeledSequence> embed_corpus(std::span<const LabeledSentence> corpus, const WordVectorTable& table);

/// Coarse label and spike raster for one free-form question.
struct Classification {
  int label = 0;
  SpikeRaster raster;
  std::vector<std::vector<int>> counts;
};
std::optional<Classification> classify_question(const std::string& question, const Artifacts& artifacts,
                                                const WordVectorTable& table, const SimOptions& opts);

/// Terminal rendering of a raster: one row per neuron, one column per tick.
std::string ascii_raster(const SpikeRaster& raster, int neurons, long ticks);

}  // namespace srnn::cli
