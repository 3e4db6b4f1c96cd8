#pragma once

#include "srnn/elman.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace srnn {

/// A trained network together with its activation calibration.
struct ElmanModel {
  ElmanParams params;
  /// Largest hidden pre-activation over the training set; spans the 16
  /// activation levels of the discretized and spiking variants.
  double calibration = 1.0;
  std::uint64_t seed = 0;

  friend bool operator==(const ElmanModel&, const ElmanModel&) = default;
};

/// JSON document, format tag "srnn-elman-model", version 1. Matrices are
/// stored row-major as {"rows", "cols", "data"}. Doubles are written with
/// shortest round-trip precision, so load(save(m)) == m bit for bit.
std::string model_to_string(const ElmanModel& model);
ElmanModel model_from_string(const std::string& text);

void save_model(const ElmanModel& model, const std::filesystem::path& path);
ElmanModel load_model(const std::filesystem::path& path);

}  // namespace srnn
