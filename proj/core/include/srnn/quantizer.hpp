#pragma once

// 4-bit weight discretization and its decomposition onto crossbar axon types.

#include "srnn/elman.hpp"
#include "srnn/model.hpp"

#include <array>
#include <filesystem>
#include <string>

namespace srnn {

using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr int kWeightMin = -8;
inline constexpr int kWeightMax = 7;
inline constexpr double kWeightScale = 8.0;

/// Synaptic value carried by each of the four axon rows of one input,
/// in row order. Equivalent to the bit weights of 4-bit two's complement.
inline constexpr std::array<int, 4> kAxonTypes = {1, 2, 4, -8};

/// Rounding used by the quantizer. Default is round-half-away-from-zero.
using Rounding = double (*)(double);
double round_half_away(double x);

/// clamp(round(8 w), -8, 7). Throws RangeError unless -1 < w < 1.
int quantize_weight(double w, Rounding rounding = round_half_away);

/// q / 8. Throws RangeError for q outside [-8, 7].
double dequantize(int q);

/// Quantizes a whole matrix; the PreconditionError names the first entry
/// outside (-1, 1).
IntMatrix quantize_matrix(const Matrix& w, Rounding rounding = round_half_away);

struct QuantizedNet {
  IntMatrix q_in;   // hidden x projection
  IntMatrix q_rec;  // hidden x hidden
  double scale = kWeightScale;
  double calibration = 1.0;
  Matrix proj;  // kept real-valued
  Matrix out;   // kept real-valued

  Eigen::Index inputs() const { return q_in.cols(); }
  Eigen::Index hidden() const { return q_in.rows(); }

  friend bool operator==(const QuantizedNet& a, const QuantizedNet& b);
};

QuantizedNet quantize_weights(const ElmanModel& model, Rounding rounding = round_half_away);

/// Real-valued network with W_in and W_rec replaced by their dequantized values.
ElmanParams dequantized_params(const QuantizedNet& qnet);

struct AxonDecomposition {
  /// selected[k] tells whether kAxonTypes[k] participates.
  std::array<bool, 4> selected{};

  int sum() const;
  friend bool operator==(const AxonDecomposition&, const AxonDecomposition&) = default;
};

/// Two's-complement bit pattern of q over the types {1, 2, 4, -8}.
/// Throws RangeError for q outside [-8, 7].
AxonDecomposition decompose_axon(int q);

/// JSON document, format tag "srnn-quantized-net", version 1.
std::string quantized_to_string(const QuantizedNet& qnet);
QuantizedNet quantized_from_string(const std::string& text);
void save_quantized(const QuantizedNet& qnet, const std::filesystem::path& path);
QuantizedNet load_quantized(const std::filesystem::path& path);

}  // namespace srnn
