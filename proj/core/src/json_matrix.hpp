#pragma once

// Matrix <-> JSON helpers shared by the model and quantized-net files.

#include "srnn/error.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace srnn::detail {

template <typename Derived>
nlohmann::json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

template <typename MatrixT>
MatrixT matrix_from_json(const nlohmann::json& j, const char* name) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw ParseError(std::string("matrix '") + name + "' needs rows, cols and data", 0);
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw ParseError(std::string("matrix '") + name + "' has inconsistent shape", 0);
  MatrixT m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<typename MatrixT::Scalar>();
  return m;
}

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
}

inline void expect_format(const nlohmann::json& j, const char* format, int version) {
  if (!j.is_object() || j.value("format", "") != format)
    throw ParseError(std::string("not a ") + format + " document", 0);
  if (j.value("version", 0) != version)
    throw ParseError(std::string("unsupported ") + format + " version", 0);
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace srnn::detail
