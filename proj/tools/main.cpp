#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace srnn::cli;

void add_embedding(CLI::App* cmd, EmbeddingArgs& e) {
  cmd->add_option("--vectors", e.vectors, "Word vector text file (header 'vocab_size dim')");
  cmd->add_option("--fallback-seed", e.fallback_seed, "Seed of the hash-based fallback embeddings")
      ->capture_default_str();
  cmd->add_option("--vocab", e.vocab, "Corpus files whose tokens receive fallback vectors");
}

void add_sim(CLI::App* cmd, SimArgs& s) {
  cmd->add_option("--encoder", s.encoder, "Input spike encoder")
      ->check(CLI::IsMember({"poisson", "deterministic"}))
      ->capture_default_str();
  cmd->add_option("--sim-seed", s.seed, "Seed of the Poisson encoder")->capture_default_str();
  cmd->add_option("--reset", s.reset, "State reset policy")
      ->check(CLI::IsMember({"per-sentence", "per-word"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train an Elman network, convert it to a spiking crossbar core and compare accuracies"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train the network with BPTT and write a model file");
  train_cmd->add_option("--train", train.train_corpus, "Training corpus")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("-o,--out", train.out, "Output model file")->required();
  train_cmd->add_option("--seed", train.config.seed, "Initialization and shuffling seed")->capture_default_str();
  train_cmd->add_option("--epochs", train.config.epochs, "Training epochs")->capture_default_str();
  train_cmd->add_option("--lr", train.config.learning_rate, "SGD learning rate")->capture_default_str();
  train_cmd->add_option("--bptt-horizon", train.config.bptt_horizon, "Truncation horizon, 0 = full sentence")
      ->capture_default_str();
  train_cmd->add_option("--weight-clip", train.config.weight_clip, "Bound on recurrent-layer weights")
      ->capture_default_str();
  train_cmd->add_flag("-v,--verbose", train.verbose, "Print every epoch");
  add_embedding(train_cmd, train.embedding);

  ConvertArgs convert;
  auto* convert_cmd = app.add_subcommand("convert", "Quantize a model and map it onto one crossbar core");
  convert_cmd->add_option("--model", convert.model, "Model file")->required()->check(CLI::ExistingFile);
  convert_cmd->add_option("-o,--out", convert.core_out, "Output core file")->required();
  convert_cmd->add_option("--quantized-out", convert.quantized_out, "Also write the quantized network");
  convert_cmd->add_option("--threshold", convert.threshold, "Neuron threshold")->capture_default_str();

  EvaluateArgs evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "Compare the four network configurations on a test set");
  eval_cmd->add_option("--model", evaluate.model, "Model file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--test", evaluate.test_corpus, "Test corpus")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("-o,--out-dir", evaluate.out_dir, "Directory for report files")->required();
  eval_cmd->add_option("--repeats", evaluate.repeats, "Passes of the stochastic spiking setup")
      ->capture_default_str();
  eval_cmd->add_option("--threads", evaluate.threads, "Worker threads, 0 = all cores")->capture_default_str();
  add_embedding(eval_cmd, evaluate.embedding);
  add_sim(eval_cmd, evaluate.sim);

  SimulateArgs simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one question through the spiking core");
  sim_cmd->add_option("--model", simulate.model, "Model file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--core", simulate.core, "Core file (default: convert the model)")->check(CLI::ExistingFile);
  sim_cmd->add_option("--text", simulate.text, "Question text")->required();
  sim_cmd->add_option("--raster", simulate.raster_out, "Write 'tick,neuron_id' raster");
  sim_cmd->add_option("--counts", simulate.counts_out, "Write per-word spike counts");
  add_embedding(sim_cmd, simulate.embedding);
  add_sim(sim_cmd, simulate.sim);

  PowerArgs power;
  auto* power_cmd = app.add_subcommand("power", "Estimated power of n cores");
  power_cmd->add_option("--cores", power.cores, "Number of cores")->capture_default_str();

  ReplArgs repl;
  auto* repl_cmd = app.add_subcommand("repl", "Interactive question classification with spike rasters");
  repl_cmd->add_option("--model", repl.model, "Model file")->required()->check(CLI::ExistingFile);
  repl_cmd->add_option("--core", repl.core, "Core file (default: convert the model)")->check(CLI::ExistingFile);
  repl_cmd->add_option("--raster", repl.raster_out, "Raster file rewritten after each question")
      ->capture_default_str();
  repl_cmd->add_flag("!--no-ascii", repl.ascii, "Do not draw the raster in the terminal");
  add_embedding(repl_cmd, repl.embedding);
  add_sim(repl_cmd, repl.sim);

  CLI11_PARSE(app, argc, argv);

  if (*train_cmd) return cmd_train(train, std::cout, std::cerr);
  if (*convert_cmd) return cmd_convert(convert, std::cout, std::cerr);
  if (*eval_cmd) return cmd_evaluate(evaluate, std::cout, std::cerr);
  if (*sim_cmd) return cmd_simulate(simulate, std::cout, std::cerr);
  if (*power_cmd) return cmd_power(power, std::cout, std::cerr);
  if (*repl_cmd) return cmd_repl(repl, std::cin, std::cout, std::cerr);
  return 1;
}
