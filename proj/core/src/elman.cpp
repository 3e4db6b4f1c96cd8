#include "srnn/elman.hpp"

#include "srnn/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace srnn {

namespace {

void expect_size(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

}  // namespace

ElmanParams ElmanParams::zeros(const ElmanDims& d) {
  return {Matrix::Zero(d.projection, d.input), Matrix::Zero(d.hidden, d.projection),
          Matrix::Zero(d.hidden, d.hidden), Matrix::Zero(d.classes, d.hidden)};
}

ElmanDims ElmanParams::dims() const {
  return {proj.cols(), proj.rows(), in.rows(), out.rows()};
}

std::size_t ElmanParams::parameter_count() const {
  return static_cast<std::size_t>(proj.size() + in.size() + rec.size() + out.size());
}

bool ElmanParams::all_finite() const {
  return proj.allFinite() && in.allFinite() && rec.allFinite() && out.allFinite();
}

void ElmanParams::validate() const {
  if (proj.size() == 0 || in.size() == 0 || rec.size() == 0 || out.size() == 0)
    throw DimensionError("empty weight matrix");
  if (in.cols() != proj.rows())
    throw DimensionError("recurrent input width does not match projection size");
  if (rec.rows() != in.rows() || rec.cols() != in.rows())
    throw DimensionError("recurrent matrix must be hidden x hidden");
  if (out.cols() != in.rows())
    throw DimensionError("output layer width does not match hidden size");
}

bool operator==(const ElmanParams& a, const ElmanParams& b) {
  auto same = [](const Matrix& x, const Matrix& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return same(a.proj, b.proj) && same(a.in, b.in) && same(a.rec, b.rec) && same(a.out, b.out);
}

Activation Activation::quantized(double calibration) {
  if (!(calibration > 0.0)) throw ConfigError("activation calibration must be positive");
  return {ActivationKind::quantized, calibration};
}

Vector project(const ElmanParams& params, const Vector& x) {
  expect_size(x, params.proj.cols(), "project");
  return (params.proj * x).cwiseMax(0.0);
}

double quantized_relu(double y, double calibration) {
  if (!(calibration > 0.0)) throw ConfigError("activation calibration must be positive");
  const double step = calibration / 16.0;
  double level = std::floor(16.0 * y / calibration);
  // Snap against the output grid so that grid points map onto themselves.
  if (step * (level + 1.0) <= y)
    level += 1.0;
  else if (step * level > y)
    level -= 1.0;
  return step * std::clamp(level, 0.0, 16.0);
}

Vector recurrent_step(const ElmanParams& params, const Vector& p, const Vector& h_prev,
                      const Activation& activation) {
  expect_size(p, params.in.cols(), "recurrent_step input");
  expect_size(h_prev, params.rec.cols(), "recurrent_step state");
  Vector pre = params.in * p + params.rec * h_prev;
  if (activation.kind == ActivationKind::continuous) return pre.cwiseMax(0.0);
  const double c = activation.calibration;
  return pre.unaryExpr([c](double y) { return quantized_relu(y, c); });
}

Vector softmax(const Vector& logits) {
  const double top = logits.maxCoeff();
  Vector e = (logits.array() - top).exp().matrix();
  return e / e.sum();
}

Vector classify(const ElmanParams& params, const Vector& h) {
  expect_size(h, params.out.cols(), "classify");
  return softmax(params.out * h);
}

Eigen::Index argmax(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

ForwardResult forward_sentence(const ElmanParams& params, std::span<const Vector> sentence,
                               const Activation& activation) {
  if (sentence.empty()) throw InputError("sentence must contain at least the EOS vector");
  ForwardResult result;
  result.hidden.reserve(sentence.size());
  Vector h = Vector::Zero(params.rec.rows());
  for (const Vector& x : sentence) {
    h = recurrent_step(params, project(params, x), h, activation);
    result.hidden.push_back(h);
  }
  result.probabilities = classify(params, h);
  return result;
}

}  // namespace srnn
