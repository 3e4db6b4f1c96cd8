#pragma once

// Bias-free ReLU Elman network: word projection, recurrent layer and a
// softmax read-out of the final hidden state.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace srnn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A sentence is a sequence of word vectors whose last element is the
/// all-zero end-of-sentence vector.
using Sentence = std::vector<Vector>;

struct ElmanDims {
  Eigen::Index input = 64;
  Eigen::Index projection = 48;
  Eigen::Index hidden = 16;
  Eigen::Index classes = 6;

  friend bool operator==(const ElmanDims&, const ElmanDims&) = default;
};

/// Weights of the network. There are no bias terms anywhere.
///
///   proj : projection x hidden-input   (48 x 64)
///   in   : hidden x projection         (16 x 48)
///   rec  : hidden x hidden             (16 x 16)
///   out  : classes x hidden            ( 6 x 16)
struct ElmanParams {
  Matrix proj;
  Matrix in;
  Matrix rec;
  Matrix out;

  static ElmanParams zeros(const ElmanDims& dims = {});

  ElmanDims dims() const;
  std::size_t parameter_count() const;
  bool all_finite() const;
  /// Throws DimensionError when the four matrices are not mutually consistent.
  void validate() const;

  friend bool operator==(const ElmanParams& a, const ElmanParams& b);
};

enum class ActivationKind { continuous, quantized };

/// Recurrent-layer nonlinearity: plain ReLU, or a ReLU discretized to
/// 16 levels spanning [0, calibration].
struct Activation {
  ActivationKind kind = ActivationKind::continuous;
  double calibration = 1.0;

  static Activation continuous() { return {}; }
  static Activation quantized(double calibration);
};

/// ReLU(proj * x).
Vector project(const ElmanParams& params, const Vector& x);

/// One recurrent update from the projected word `p` and previous state.
/// The returned state is entrywise non-negative.
Vector recurrent_step(const ElmanParams& params, const Vector& p, const Vector& h_prev,
                      const Activation& activation);

/// (c/16) * clamp(floor(16 y / c), 0, 16). Throws ConfigError for c <= 0.
double quantized_relu(double y, double calibration);

/// softmax(out * h).
Vector classify(const ElmanParams& params, const Vector& h);

/// Numerically stable softmax.
Vector softmax(const Vector& logits);

/// Index of the largest entry; ties resolve to the lowest index.
Eigen::Index argmax(const Vector& v);

struct ForwardResult {
  Vector probabilities;
  /// Hidden state after each word, EOS included.
  std::vector<Vector> hidden;
};

/// Runs the sentence from a zero state and classifies the state left after
/// the final (EOS) word. Throws InputError on an empty sentence.
ForwardResult forward_sentence(const ElmanParams& params, std::span<const Vector> sentence,
                               const Activation& activation);

}  // namespace srnn
