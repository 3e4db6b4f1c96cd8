#include "commands.hpp"

#include "srnn/error.hpp"
#include "srnn/hw_model.hpp"
#include "srnn/model.hpp"
#include "srnn/pipeline.hpp"
#include "srnn/quantizer.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace srnn::cli {

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

template <typename Fn>
int guarded(std::ostream& err, const char* cmd, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "srnn " << cmd << ": " << e.what() << '\n';
    return 1;
  }
}

Artifacts load_artifacts(const fs::path& model_path, const std::optional<fs::path>& core_path) {
  Artifacts a = Artifacts::convert(load_model(model_path));
  if (core_path) a.core = load_core(*core_path);
  return a;
}

}  // namespace

SimOptions to_sim_options(const SimArgs& args) {
  SimOptions o;
  if (args.encoder == "poisson")
    o.encoder = Encoder::poisson;
  else if (args.encoder == "deterministic")
    o.encoder = Encoder::deterministic;
  else
    throw ConfigError("unknown encoder '" + args.encoder + "' (poisson | deterministic)");
  if (args.reset == "per-sentence")
    o.reset = ResetPolicy::per_sentence;
  else if (args.reset == "per-word")
    o.reset = ResetPolicy::per_word;
  else
    throw ConfigError("unknown reset policy '" + args.reset + "' (per-sentence | per-word)");
  o.seed = args.seed;
  return o;
}

WordVectorTable make_table(const EmbeddingArgs& args, const std::vector<fs::path>& default_vocab,
                           std::ostream& err) {
  if (args.vectors) return load_vectors(*args.vectors, [&err](const std::string& w) { err << "warning: " << w << '\n'; });
  std::vector<LabeledSentence> all;
  for (const auto* list : {&default_vocab, &args.vocab})
    for (const fs::path& p : *list) {
      auto corpus = parse_corpus(p);
      all.insert(all.end(), std::make_move_iterator(corpus.begin()), std::make_move_iterator(corpus.end()));
    }
  const auto vocab = vocabulary_of(all);
  if (vocab.empty()) throw ConfigError("fallback embeddings need a vocabulary: pass --vocab <corpus> or --vectors <file>");
  return fallback_vectors(vocab, args.fallback_seed);
}

std::vector<LabeledSequence> embed_corpus(std::span<const LabeledSentence> corpus, const WordVectorTable& table) {
  std::vector<LabeledSequence> out;
  out.reserve(corpus.size());
  for (const LabeledSentence& s : corpus) out.push_back({embed(preprocess(s.tokens), table), s.label});
  return out;
}

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, "train", [&] {
    const auto corpus = parse_corpus(args.train_corpus);
    if (corpus.empty()) throw InputError("training corpus " + args.train_corpus.string() + " is empty");
    const WordVectorTable table = make_table(args.embedding, {args.train_corpus}, err);
    const auto data = embed_corpus(corpus, table);

    ElmanDims dims;
    dims.input = table.dim();
    auto report = [&](const EpochStats& s) {
      if (args.verbose || s.epoch == args.config.epochs) {
        char line[128];
        std::snprintf(line, sizeof line, "epoch %d loss %.6f train-accuracy %.4f", s.epoch, s.mean_loss, s.accuracy);
        out << line << '\n';
      }
    };
    ElmanModel model;
    model.params = bptt_train(data, args.config, dims, report);
    model.calibration = calibrate_activation(model.params, data);
    model.seed = args.config.seed;
    save_model(model, args.out);
    out << "trained on " << corpus.size() << " sentences; calibration " << model.calibration << "; wrote "
        << args.out.string() << '\n';
    return 0;
  });
}

int cmd_convert(const ConvertArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, "convert", [&] {
    const ElmanModel model = load_model(args.model);
    const QuantizedNet qnet = quantize_weights(model);
    const CoreConfig core = build_core(qnet, args.threshold);
    if (args.quantized_out) save_quantized(qnet, *args.quantized_out);
    save_core(core, args.core_out);
    out << "mapped " << core.inputs << " inputs + " << core.hidden << " hidden onto " << core.axons_used()
        << "/" << kCoreAxons << " axons; wrote " << args.core_out.string() << '\n';
    return 0;
  });
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, "evaluate", [&] {
    const ElmanModel model = load_model(args.model);
    const auto corpus = parse_corpus(args.test_corpus);
    const WordVectorTable table = make_table(args.embedding, {args.test_corpus}, err);
    const auto test = embed_corpus(corpus, table);

    EvalOptions opts;
    opts.sim = to_sim_options(args.sim);
    opts.repeats = args.repeats;
    opts.threads = args.threads;
    const Comparison cmp = compare_all(model, test, opts);

    fs::create_directories(args.out_dir);
    const std::string table_text = comparison_table(cmp);
    write_file(args.out_dir / "report.tsv", table_text);
    write_file(args.out_dir / "summary.json", comparison_json(cmp));
    for (const EvalReport& r : cmp.reports)
      write_file(args.out_dir / ("confusion_" + std::string(setup_name(r.setup)) + ".csv"), confusion_csv(r));
    out << table_text;
    return 0;
  });
}

std::optional<Classification> classify_question(const std::string& question, const Artifacts& artifacts,
                                                const WordVectorTable& table, const SimOptions& opts) {
  const auto tokens = preprocess(tokenize(question));
  if (tokens.empty()) return std::nullopt;
  const Sentence sentence = embed(tokens, table);
  SpikingOutcome o = run_spiking(artifacts, sentence, opts);
  return Classification{static_cast<int>(argmax(o.probabilities)), std::move(o.run.raster), std::move(o.run.counts)};
}

std::string ascii_raster(const SpikeRaster& raster, int neurons, long ticks) {
  std::vector<std::string> rows(static_cast<std::size_t>(neurons), std::string(static_cast<std::size_t>(ticks), '.'));
  for (const SpikeEvent& e : raster)
    if (e.neuron >= 0 && e.neuron < neurons && e.tick >= 0 && e.tick < ticks) rows[e.neuron][e.tick] = '|';
  std::ostringstream s;
  for (int j = 0; j < neurons; ++j) {
    char label[16];
    std::snprintf(label, sizeof label, "%3d ", j);
    s << label << rows[j] << '\n';
  }
  return s.str();
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, "simulate", [&] {
    const Artifacts artifacts = load_artifacts(args.model, args.core);
    const WordVectorTable table = make_table(args.embedding, {}, err);
    const SimOptions opts = to_sim_options(args.sim);
    const auto result = classify_question(args.text, artifacts, table, opts);
    if (!result) throw InputError("the question contains no words");
    if (args.raster_out) {
      std::ofstream f(*args.raster_out, std::ios::binary | std::ios::trunc);
      write_raster(f, result->raster);
    }
    if (args.counts_out) {
      std::ofstream f(*args.counts_out, std::ios::binary | std::ios::trunc);
      write_counts(f, result->counts);
    }
    out << class_name(result->label) << '\n';
    return 0;
  });
}

int cmd_power(const PowerArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, "power", [&] {
    const double watts = estimate_power(args.cores);
    char line[128];
    std::snprintf(line, sizeof line, "%ld core(s): %.6g W (%.2f uW)", args.cores, watts, watts * 1e6);
    out << line << '\n';
    return 0;
  });
}

int cmd_repl(const ReplArgs& args, std::istream& in, std::ostream& out, std::ostream& err) {
  return guarded(err, "repl", [&] {
    const Artifacts artifacts = load_artifacts(args.model, args.core);
    const WordVectorTable table = make_table(args.embedding, {}, err);
    const SimOptions opts = to_sim_options(args.sim);
    std::string line;
    while (true) {
      out << "question> " << std::flush;
      if (!std::getline(in, line)) break;
      if (line == "quit" || line == "exit") break;
      const auto result = classify_question(line, artifacts, table, opts);
      if (!result) continue;
      {
        std::ofstream f(args.raster_out, std::ios::binary | std::ios::trunc);
        write_raster(f, result->raster);
      }
      out << class_name(result->label) << '\n';
      if (args.ascii) {
        const long ticks = static_cast<long>(result->counts.size()) * opts.window;
        out << ascii_raster(result->raster, artifacts.core->hidden, ticks);
      }
    }
    out << '\n';
    return 0;
  });
}

}  // namespace srnn::cli
