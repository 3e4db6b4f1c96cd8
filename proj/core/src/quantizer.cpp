#include "srnn/quantizer.hpp"

#include "json_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace srnn {

namespace {
constexpr const char* kFormat = "srnn-quantized-net";

void check_level(int q) {
  if (q < kWeightMin || q > kWeightMax)
    throw RangeError("quantized weight " + std::to_string(q) + " outside [-8, 7]");
}
}  // namespace

double round_half_away(double x) { return std::round(x); }

int quantize_weight(double w, Rounding rounding) {
  if (!(w > -1.0 && w < 1.0))
    throw RangeError("weight " + std::to_string(w) + " outside (-1, 1)");
  const double scaled = rounding(kWeightScale * w);
  return static_cast<int>(std::clamp(scaled, double(kWeightMin), double(kWeightMax)));
}

double dequantize(int q) {
  check_level(q);
  return q / kWeightScale;
}

IntMatrix quantize_matrix(const Matrix& w, Rounding rounding) {
  IntMatrix q(w.rows(), w.cols());
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      const double v = w(r, c);
      if (!(v > -1.0 && v < 1.0)) {
        throw PreconditionError("weight at (" + std::to_string(r) + ", " + std::to_string(c) +
                                    ") = " + std::to_string(v) + " is outside (-1, 1)",
                                static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      }
      q(r, c) = quantize_weight(v, rounding);
    }
  }
  return q;
}

bool operator==(const QuantizedNet& a, const QuantizedNet& b) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return same(a.q_in, b.q_in) && same(a.q_rec, b.q_rec) && a.scale == b.scale &&
         a.calibration == b.calibration && same(a.proj, b.proj) && same(a.out, b.out);
}

QuantizedNet quantize_weights(const ElmanModel& model, Rounding rounding) {
  model.params.validate();
  QuantizedNet q;
  q.q_in = quantize_matrix(model.params.in, rounding);
  q.q_rec = quantize_matrix(model.params.rec, rounding);
  q.scale = kWeightScale;
  q.calibration = model.calibration;
  q.proj = model.params.proj;
  q.out = model.params.out;
  return q;
}

ElmanParams dequantized_params(const QuantizedNet& qnet) {
  ElmanParams p;
  p.proj = qnet.proj;
  p.in = qnet.q_in.cast<double>() / qnet.scale;
  p.rec = qnet.q_rec.cast<double>() / qnet.scale;
  p.out = qnet.out;
  return p;
}

int AxonDecomposition::sum() const {
  int s = 0;
  for (std::size_t k = 0; k < kAxonTypes.size(); ++k)
    if (selected[k]) s += kAxonTypes[k];
  return s;
}

AxonDecomposition decompose_axon(int q) {
  check_level(q);
  const auto bits = static_cast<unsigned>(q) & 0xFu;
  AxonDecomposition d;
  for (std::size_t k = 0; k < 4; ++k) d.selected[k] = (bits >> k) & 1u;
  return d;
}

std::string quantized_to_string(const QuantizedNet& qnet) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = 1;
  j["scale"] = qnet.scale;
  j["calibration"] = qnet.calibration;
  j["Q_in"] = detail::matrix_to_json(qnet.q_in);
  j["Q_rec"] = detail::matrix_to_json(qnet.q_rec);
  j["W_proj"] = detail::matrix_to_json(qnet.proj);
  j["W_out"] = detail::matrix_to_json(qnet.out);
  return j.dump(1) + "\n";
}

QuantizedNet quantized_from_string(const std::string& text) {
  const nlohmann::json j = detail::parse_json(text);
  detail::expect_format(j, kFormat, 1);
  try {
    QuantizedNet q;
    q.scale = j.at("scale").get<double>();
    q.calibration = j.at("calibration").get<double>();
    q.q_in = detail::matrix_from_json<IntMatrix>(j.at("Q_in"), "Q_in");
    q.q_rec = detail::matrix_from_json<IntMatrix>(j.at("Q_rec"), "Q_rec");
    q.proj = detail::matrix_from_json<Matrix>(j.at("W_proj"), "W_proj");
    q.out = detail::matrix_from_json<Matrix>(j.at("W_out"), "W_out");
    if (!(q.scale > 0.0) || !(q.calibration > 0.0))
      throw ParseError("scale and calibration must be positive", 0);
    if (q.q_rec.rows() != q.q_in.rows() || q.q_rec.cols() != q.q_in.rows() ||
        q.proj.rows() != q.q_in.cols() || q.out.cols() != q.q_in.rows())
      throw ParseError("inconsistent matrix shapes", 0);
    for (const IntMatrix* m : {&q.q_in, &q.q_rec})
      if (m->size() > 0 && (m->minCoeff() < kWeightMin || m->maxCoeff() > kWeightMax))
        throw ParseError("quantized weight outside [-8, 7]", 0);
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 0);
  }
}

void save_quantized(const QuantizedNet& qnet, const std::filesystem::path& path) {
  detail::write_text(path, quantized_to_string(qnet));
}

QuantizedNet load_quantized(const std::filesystem::path& path) {
  return quantized_from_string(detail::read_text(path));
}

}  // namespace srnn
