#include "srnn/nlp_data.hpp"

#include "srnn/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace srnn {

std::optional<int> class_from_name(std::string_view name) {
  for (int i = 0; i < kNumClasses; ++i)
    if (kClassNames[i] == name) return i;
  return std::nullopt;
}

std::string_view class_name(int label) {
  if (label < 0 || label >= kNumClasses) throw RangeError("class index out of range");
  return kClassNames[label];
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<LabeledSentence> parse_corpus(std::istream& in) {
  std::vector<LabeledSentence> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;
    const auto space = line.find_first_of(" \t");
    const std::string head = line.substr(0, space);
    const auto colon = head.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'COARSE:fine question'", lineno);
    const auto label = class_from_name(head.substr(0, colon));
    if (!label) throw ParseError("unknown coarse label '" + head.substr(0, colon) + "'", lineno);
    LabeledSentence s;
    s.label = *label;
    s.fine_label = head.substr(colon + 1);
    if (space != std::string::npos) s.tokens = tokenize(std::string_view(line).substr(space));
    if (s.tokens.empty()) throw ParseError("question text is empty", lineno);
    corpus.push_back(std::move(s));
  }
  return corpus;
}

std::vector<LabeledSentence> parse_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus " + path.string());
  return parse_corpus(in);
}

std::string serialize_corpus(std::span<const LabeledSentence> corpus) {
  std::string out;
  for (const LabeledSentence& s : corpus) {
    out += class_name(s.label);
    out += ':';
    out += s.fine_label;
    for (const std::string& t : s.tokens) {
      out += ' ';
      out += t;
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> preprocess(std::span<const std::string> raw) {
  std::vector<std::string> out;
  for (const std::string& tok : raw) {
    // Bytes >= 0x80 (non-ASCII letters) count as word characters.
    const bool has_word_char = std::any_of(tok.begin(), tok.end(), [](unsigned char c) {
      return c >= 0x80 || std::isalnum(c);
    });
    if (!has_word_char) continue;
    std::string lower = tok;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.push_back(std::move(lower));
  }
  return out;
}

WordVectorTable::WordVectorTable(int dim) : dim_(dim), average_(Vector::Zero(dim)) {
  if (dim < 1) throw ConfigError("embedding dimension must be positive");
}

bool WordVectorTable::insert(const std::string& token, Vector v) {
  if (v.size() != dim_) throw DimensionError("word vector for '" + token + "' has wrong dimension");
  auto [it, inserted] = vectors_.insert_or_assign(token, std::move(v));
  return !inserted;
}

const Vector* WordVectorTable::find(const std::string& token) const {
  const auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

void WordVectorTable::recompute_average() {
  average_ = Vector::Zero(dim_);
  if (vectors_.empty()) return;
  // Sum in sorted key order so the result does not depend on hash layout.
  std::vector<const std::string*> keys;
  keys.reserve(vectors_.size());
  for (const auto& kv : vectors_) keys.push_back(&kv.first);
  std::sort(keys.begin(), keys.end(), [](auto* a, auto* b) { return *a < *b; });
  for (const std::string* k : keys) average_ += vectors_.at(*k);
  average_ /= static_cast<double>(vectors_.size());
}

WordVectorTable load_vectors(std::istream& in, const WarningSink& warn, int expected_dim) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing 'vocab_size dim' header", 1);
  std::istringstream header(line);
  long count = 0;
  long dim = 0;
  if (!(header >> count >> dim) || count < 0) throw ParseError("bad 'vocab_size dim' header", 1);
  if (dim != expected_dim)
    throw ParseError("vector dimension " + std::to_string(dim) + " != " + std::to_string(expected_dim), 1);

  WordVectorTable table(expected_dim);
  std::size_t lineno = 1;
  long rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    Vector v(expected_dim);
    for (int k = 0; k < expected_dim; ++k)
      if (!(ls >> v[k])) throw ParseError("expected " + std::to_string(expected_dim) + " values", lineno);
    double extra = 0.0;
    if (ls >> extra) throw ParseError("more than " + std::to_string(expected_dim) + " values", lineno);
    if (table.insert(word, std::move(v)) && warn)
      warn("line " + std::to_string(lineno) + ": duplicate word '" + word + "', keeping the last vector");
    ++rows;
  }
  if (rows != count)
    throw ParseError("header announces " + std::to_string(count) + " vectors, found " + std::to_string(rows), 1);
  table.recompute_average();
  return table;
}

WordVectorTable load_vectors(const std::filesystem::path& path, const WarningSink& warn,
                             int expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open vector file " + path.string());
  return load_vectors(in, warn, expected_dim);
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_open(std::uint64_t& state) {
  // (0, 1], never zero so the logarithm below stays finite.
  return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

Vector fallback_vector(std::string_view token, std::uint64_t seed, int dim) {
  std::uint64_t state = fnv1a(token) ^ (seed * 0xd1b54a32d192ed03ULL);
  Vector v(dim);
  for (int k = 0; k < dim; k += 2) {
    const double r = std::sqrt(-2.0 * std::log(unit_open(state)));
    const double theta = 2.0 * std::numbers::pi * unit_open(state);
    v[k] = r * std::cos(theta);
    if (k + 1 < dim) v[k + 1] = r * std::sin(theta);
  }
  return v / v.norm();
}

WordVectorTable fallback_vectors(std::span<const std::string> vocabulary, std::uint64_t seed, int dim) {
  WordVectorTable table(dim);
  for (const std::string& tok : vocabulary) table.insert(tok, fallback_vector(tok, seed, dim));
  table.recompute_average();
  return table;
}

std::vector<std::string> vocabulary_of(std::span<const LabeledSentence> corpus) {
  std::vector<std::string> vocab;
  std::unordered_set<std::string> seen;
  for (const LabeledSentence& s : corpus)
    for (std::string& tok : preprocess(s.tokens))
      if (seen.insert(tok).second) vocab.push_back(std::move(tok));
  return vocab;
}

Sentence embed(std::span<const std::string> tokens, const WordVectorTable& table) {
  Sentence out;
  out.reserve(tokens.size() + 1);
  for (const std::string& tok : tokens) {
    const Vector* v = table.find(tok);
    out.push_back(v ? *v : table.average());
  }
  out.push_back(Vector::Zero(table.dim()));
  return out;
}

}  // namespace srnn
