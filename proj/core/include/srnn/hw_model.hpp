#pragma once

// Model of a single 256x256 crossbar core: hardware constraint checks,
// mapping of a quantized recurrent layer onto axon rows, and chip power.

#include "srnn/error.hpp"
#include "srnn/quantizer.hpp"

#include <array>
#include <bitset>
#include <filesystem>
#include <string>
#include <vector>

namespace srnn {

inline constexpr int kCoreAxons = 256;
inline constexpr int kCoreNeurons = 256;
inline constexpr int kMaxDelay = 15;
inline constexpr int kAxonsPerInput = 4;
inline constexpr int kChipCores = 4096;
inline constexpr double kChipPowerWatts = 0.070;

enum class SourceKind { unused, input, recurrent };

struct AxonSource {
  SourceKind kind = SourceKind::unused;
  int index = 0;
  friend bool operator==(const AxonSource&, const AxonSource&) = default;
};

struct AxonRow {
  int type = 1;   // synaptic value G_i, one of kAxonTypes
  int delay = 0;  // ticks, [0, kMaxDelay]
  AxonSource source;
  friend bool operator==(const AxonRow&, const AxonRow&) = default;
};

struct CoreConfig {
  std::array<AxonRow, kCoreAxons> axons{};
  /// connectivity[i][j]: axon row i drives neuron j.
  std::array<std::bitset<kCoreNeurons>, kCoreAxons> connectivity{};
  int threshold = 8;
  int inputs = 0;
  int hidden = 0;

  int neurons_used() const { return hidden; }
  int axons_used() const { return (inputs + hidden) * kAxonsPerInput; }
  /// First row of the four rows carrying `source`.
  int first_row(SourceKind kind, int index) const;
  /// Sum of connected axon types from `source` onto `neuron`.
  int reconstructed_weight(SourceKind kind, int index, int neuron) const;

  friend bool operator==(const CoreConfig&, const CoreConfig&) = default;
};

struct ConstraintViolation {
  std::string rule;
  long measured = 0;
  long limit = 0;
};

struct ConstraintReport {
  bool ok = true;
  std::vector<ConstraintViolation> violations;
  std::string to_string() const;
};

/// ok iff n_in + n_hid <= 256 / n_bits (plus sanity rules on the arguments).
ConstraintReport check_constraints(long n_in, long n_hid, long n_bits);

class MappingError : public Error {
public:
  explicit MappingError(ConstraintReport report)
      : Error("network does not fit on one core: " + report.to_string()), report_(std::move(report)) {}
  const ConstraintReport& report() const noexcept { return report_; }

private:
  ConstraintReport report_;
};

/// Rows [0, 4 n_in) carry the external inputs with delay 0, the following
/// 4 n_hid rows carry the hidden-layer feedback with `feedback_delay`.
/// Within each group of four the types are ordered 1, 2, 4, -8.
CoreConfig build_core(const QuantizedNet& qnet, int threshold = 8, int feedback_delay = kMaxDelay);

/// Share of the full-chip power budget used by `n_cores` cores, in watts.
double estimate_power(long n_cores);

/// Text format "srnn-core 1"; see docs in README.
std::string core_to_string(const CoreConfig& core);
CoreConfig core_from_string(const std::string& text);
void save_core(const CoreConfig& core, const std::filesystem::path& path);
CoreConfig load_core(const std::filesystem::path& path);

}  // namespace srnn
