#include "srnn/model.hpp"

#include "json_matrix.hpp"

namespace srnn {

namespace {
constexpr const char* kFormat = "srnn-elman-model";
}

std::string model_to_string(const ElmanModel& model) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = 1;
  j["calibration"] = model.calibration;
  j["seed"] = model.seed;
  j["W_proj"] = detail::matrix_to_json(model.params.proj);
  j["W_in"] = detail::matrix_to_json(model.params.in);
  j["W_rec"] = detail::matrix_to_json(model.params.rec);
  j["W_out"] = detail::matrix_to_json(model.params.out);
  return j.dump(1) + "\n";
}

ElmanModel model_from_string(const std::string& text) {
  const nlohmann::json j = detail::parse_json(text);
  detail::expect_format(j, kFormat, 1);
  try {
    ElmanModel m;
    m.calibration = j.at("calibration").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.params.proj = detail::matrix_from_json<Matrix>(j.at("W_proj"), "W_proj");
    m.params.in = detail::matrix_from_json<Matrix>(j.at("W_in"), "W_in");
    m.params.rec = detail::matrix_from_json<Matrix>(j.at("W_rec"), "W_rec");
    m.params.out = detail::matrix_from_json<Matrix>(j.at("W_out"), "W_out");
    m.params.validate();
    if (!(m.calibration > 0.0)) throw ParseError("calibration must be positive", 0);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 0);
  }
}

void save_model(const ElmanModel& model, const std::filesystem::path& path) {
  detail::write_text(path, model_to_string(model));
}

ElmanModel load_model(const std::filesystem::path& path) {
  return model_from_string(detail::read_text(path));
}

}  // namespace srnn
