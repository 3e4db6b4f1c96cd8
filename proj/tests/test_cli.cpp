#include "commands.hpp"
#include "srnn/error.hpp"
#include "srnn/model.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace srnn;
using namespace srnn::cli;

namespace {

const fs::path kSample = SRNN_SAMPLE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

TrainArgs quick_train(const fs::path& out, std::uint64_t seed = 3) {
  TrainArgs t;
  t.train_corpus = kSample / "train.label";
  t.out = out;
  t.config.epochs = 5;
  t.config.seed = seed;
  t.embedding.vocab = {kSample / "test.label"};
  return t;
}

EmbeddingArgs sample_vocab() {
  EmbeddingArgs e;
  e.vocab = {kSample / "train.label", kSample / "test.label"};
  return e;
}

}  // namespace

TEST_CASE("train is reproducible byte for byte") {
  TempDir dir("srnn_cli_train");
  std::ostringstream out, err;
  REQUIRE(cmd_train(quick_train(dir.path / "a.json"), out, err) == 0);
  REQUIRE(cmd_train(quick_train(dir.path / "b.json"), out, err) == 0);
  REQUIRE(cmd_train(quick_train(dir.path / "c.json", 4), out, err) == 0);
  CHECK(slurp(dir.path / "a.json") == slurp(dir.path / "b.json"));
  CHECK(slurp(dir.path / "a.json") != slurp(dir.path / "c.json"));
  CHECK(err.str().empty());
  CHECK(out.str().find("epoch 5 loss") != std::string::npos);
}

TEST_CASE("convert, evaluate and simulate a trained model") {
  TempDir dir("srnn_cli_pipeline");
  std::ostringstream out, err;
  REQUIRE(cmd_train(quick_train(dir.path / "model.json"), out, err) == 0);

  ConvertArgs conv;
  conv.model = dir.path / "model.json";
  conv.core_out = dir.path / "core.txt";
  conv.quantized_out = dir.path / "quantized.json";
  REQUIRE(cmd_convert(conv, out, err) == 0);
  const CoreConfig core = load_core(conv.core_out);
  CHECK(core.inputs == 48);
  CHECK(core.hidden == 16);
  CHECK(load_quantized(*conv.quantized_out).q_in.rows() == 16);

  EvaluateArgs ev;
  ev.model = dir.path / "model.json";
  ev.test_corpus = kSample / "test.label";
  ev.embedding = sample_vocab();
  ev.sim.seed = 5;
  for (const char* name : {"eval1", "eval2"}) {
    ev.out_dir = dir.path / name;
    std::ostringstream table;
    REQUIRE(cmd_evaluate(ev, table, err) == 0);
    CHECK(slurp(ev.out_dir / "report.tsv") == table.str());
  }
  const std::string report = slurp(dir.path / "eval1" / "report.tsv");
  CHECK(std::count(report.begin(), report.end(), '\n') == 5);
  for (const char* f : {"report.tsv", "summary.json", "confusion_FLOAT32_FULL.csv", "confusion_Q4_WEIGHTS.csv",
                        "confusion_Q4_WEIGHTS_Q4_HIDDEN.csv", "confusion_SPIKING.csv"})
    CHECK(slurp(dir.path / "eval1" / f) == slurp(dir.path / "eval2" / f));

  SimulateArgs sim;
  sim.model = dir.path / "model.json";
  sim.core = conv.core_out;
  sim.text = "Where was peter born ?";
  sim.embedding = sample_vocab();
  sim.raster_out = dir.path / "raster.csv";
  sim.counts_out = dir.path / "counts.csv";
  std::ostringstream label;
  REQUIRE(cmd_simulate(sim, label, err) == 0);
  CHECK(class_from_name(label.str().substr(0, label.str().size() - 1)).has_value());
  std::ifstream raster(*sim.raster_out);
  CHECK_NOTHROW(read_raster(raster));
  const std::string counts = slurp(*sim.counts_out);
  CHECK(std::count(counts.begin(), counts.end(), '\n') == 5);  // four words and EOS
}

TEST_CASE("convert refuses a network that does not fit") {
  TempDir dir("srnn_cli_convert");
  ElmanModel big;
  big.params = ElmanParams::zeros(ElmanDims{64, 49, 16, 6});
  save_model(big, dir.path / "big.json");
  ConvertArgs conv;
  conv.model = dir.path / "big.json";
  conv.core_out = dir.path / "core.txt";
  std::ostringstream out, err;
  CHECK(cmd_convert(conv, out, err) != 0);
  const std::string diagnostic = err.str();
  CHECK(diagnostic.find("65 > 64") != std::string::npos);
  CHECK(std::count(diagnostic.begin(), diagnostic.end(), '\n') == 1);
  CHECK_FALSE(fs::exists(conv.core_out));
}

TEST_CASE("power") {
  std::ostringstream out, err;
  CHECK(cmd_power({1}, out, err) == 0);
  CHECK(out.str().find("17.09 uW") != std::string::npos);
  CHECK(cmd_power({4096}, out, err) == 0);
  CHECK(out.str().find("0.07 W") != std::string::npos);
  CHECK(cmd_power({5000}, out, err) == 1);
  CHECK(err.str().rfind("srnn power: ", 0) == 0);
}

TEST_CASE("repl re-prompts on empty input and writes the raster format") {
  TempDir dir("srnn_cli_repl");
  std::ostringstream out, err;
  REQUIRE(cmd_train(quick_train(dir.path / "model.json"), out, err) == 0);
  ReplArgs repl;
  repl.model = dir.path / "model.json";
  repl.embedding = sample_vocab();
  repl.raster_out = dir.path / "raster.csv";
  std::istringstream in("\n  ?  \nwhat is the meaning of life\nquit\nignored\n");
  std::ostringstream session;
  REQUIRE(cmd_repl(repl, in, session, err) == 0);
  const std::string text = session.str();
  std::size_t prompts = 0;
  for (auto p = text.find("question> "); p != std::string::npos; p = text.find("question> ", p + 1)) ++prompts;
  CHECK(prompts == 4);
  std::size_t labels = 0;
  for (std::string_view name : kClassNames)
    if (text.find(std::string("question> ") + std::string(name) + "\n") != std::string::npos) ++labels;
  CHECK(labels == 1);
  // The file is exactly what write_raster would produce for its own contents.
  const std::string raw = slurp(repl.raster_out);
  std::istringstream rs(raw);
  std::ostringstream again;
  write_raster(again, read_raster(rs));
  CHECK(again.str() == raw);
}

TEST_CASE("argument errors become one-line diagnostics") {
  std::ostringstream out, err;
  TrainArgs t = quick_train("/nonexistent/dir/model.json");
  t.train_corpus = "/nonexistent/train.label";
  CHECK(cmd_train(t, out, err) == 1);
  CHECK(err.str().rfind("srnn train: ", 0) == 0);
  SimArgs bad;
  bad.encoder = "gaussian";
  CHECK_THROWS_AS(to_sim_options(bad), ConfigError);
  CHECK_THROWS_AS(make_table(EmbeddingArgs{}, {}, err), ConfigError);
}

TEST_CASE("ascii raster") {
  const std::string art = ascii_raster({{0, 0}, {3, 1}}, 2, 4);
  CHECK(art == "  0 |...\n  1 ...|\n");
}
