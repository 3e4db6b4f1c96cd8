#pragma once

// Question-classification corpus parsing, token preprocessing and word
// vector lookup.

#include "srnn/elman.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace srnn {

inline constexpr int kNumClasses = 6;
inline constexpr int kEmbeddingDim = 64;

/// Coarse question classes, in reporting order.
inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {"ABBR", "DESC", "NUM",
                                                                          "ENTY", "HUM",  "LOC"};

std::optional<int> class_from_name(std::string_view name);
std::string_view class_name(int label);

struct LabeledSentence {
  int label = 0;
  std::vector<std::string> tokens;  // as written in the corpus
  std::string fine_label;           // parsed, unused

  friend bool operator==(const LabeledSentence&, const LabeledSentence&) = default;
};

/// Lines of the form "COARSE:fine question tokens ...". Blank lines are
/// skipped. Throws ParseError carrying the 1-based line number.
std::vector<LabeledSentence> parse_corpus(std::istream& in);
std::vector<LabeledSentence> parse_corpus(const std::filesystem::path& path);
std::string serialize_corpus(std::span<const LabeledSentence> corpus);

/// Whitespace tokenization of a free-form question.
std::vector<std::string> tokenize(std::string_view text);

/// Lower-cases every token and drops tokens made only of punctuation.
std::vector<std::string> preprocess(std::span<const std::string> raw);

class WordVectorTable {
public:
  explicit WordVectorTable(int dim = kEmbeddingDim);

  int dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  /// Returns true when an existing entry was replaced.
  bool insert(const std::string& token, Vector v);
  const Vector* find(const std::string& token) const;
  bool contains(const std::string& token) const { return find(token) != nullptr; }
  /// Mean of all stored vectors (zero for an empty table).
  const Vector& average() const { return average_; }
  void recompute_average();

private:
  int dim_;
  std::unordered_map<std::string, Vector> vectors_;
  Vector average_;
};

using WarningSink = std::function<void(const std::string&)>;

/// Text format: header "vocab_size dim", then "word v1 ... v_dim" per line.
/// Throws ParseError when dim != expected_dim or a row is malformed.
/// Duplicate words keep the last occurrence and emit a warning.
WordVectorTable load_vectors(std::istream& in, const WarningSink& warn = {},
                             int expected_dim = kEmbeddingDim);
WordVectorTable load_vectors(const std::filesystem::path& path, const WarningSink& warn = {},
                             int expected_dim = kEmbeddingDim);

/// Deterministic pseudo-random unit vector for a token, independent of the
/// platform's standard library.
Vector fallback_vector(std::string_view token, std::uint64_t seed, int dim = kEmbeddingDim);

/// Table holding fallback vectors for every token of `vocabulary`.
WordVectorTable fallback_vectors(std::span<const std::string> vocabulary, std::uint64_t seed,
                                 int dim = kEmbeddingDim);

/// Distinct preprocessed tokens of a corpus, in first-seen order.
std::vector<std::string> vocabulary_of(std::span<const LabeledSentence> corpus);

/// Looks up every token (misses map to the table average) and appends the
/// zero EOS vector.
Sentence embed(std::span<const std::string> tokens, const WordVectorTable& table);

}  // namespace srnn
