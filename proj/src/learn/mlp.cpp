#include "ued/learn/mlp.hpp"

#include <cmath>

#include "ued/core/errors.hpp"

namespace ued::learn {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::size_t MlpShape::parameter_count() const {
  const std::size_t d = observation_size, h = hidden, a = actions;
  return h * d + h + h * h + h + a * h + a + h + 1;
}

MlpPolicy::MlpPolicy(MlpShape shape) : shape_(shape) {
  if (shape.observation_size < 1) throw FieldError("observation_size", "must be >= 1");
  if (shape.hidden < 1) throw FieldError("hidden", "must be >= 1");
  if (shape.actions < 1) throw FieldError("actions", "must be >= 1");
  params_ = VectorXd::Zero(static_cast<Eigen::Index>(shape.parameter_count()));
}

MlpPolicy::Offsets MlpPolicy::offsets() const {
  const std::size_t d = shape_.observation_size, h = shape_.hidden, a = shape_.actions;
  Offsets o{};
  o.w1 = 0;
  o.b1 = o.w1 + h * d;
  o.w2 = o.b1 + h;
  o.b2 = o.w2 + h * h;
  o.wp = o.b2 + h;
  o.bp = o.wp + a * h;
  o.wv = o.bp + a;
  o.bv = o.wv + h;
  o.end = o.bv + 1;
  return o;
}

MlpPolicy MlpPolicy::initialized(MlpShape shape, Rng& rng) {
  MlpPolicy p(shape);
  const auto o = p.offsets();
  auto fill = [&](std::size_t begin, std::size_t end, double scale) {
    for (std::size_t i = begin; i < end; ++i) p.params_[static_cast<Eigen::Index>(i)] = scale * standard_normal(rng);
  };
  fill(o.w1, o.b1, 1.0 / std::sqrt(static_cast<double>(shape.observation_size)));
  fill(o.w2, o.b2, 1.0 / std::sqrt(static_cast<double>(shape.hidden)));
  fill(o.wp, o.bp, 0.01 / std::sqrt(static_cast<double>(shape.hidden)));
  fill(o.wv, o.bv, 1.0 / std::sqrt(static_cast<double>(shape.hidden)));
  return p;
}

ForwardCache MlpPolicy::forward(const MatrixXd& observations) const {
  if (observations.rows() != shape_.observation_size) {
    throw FieldError("observation", "expected dimension " + std::to_string(shape_.observation_size) +
                                        ", got " + std::to_string(observations.rows()));
  }
  const auto o = offsets();
  const int d = shape_.observation_size, h = shape_.hidden, a = shape_.actions;
  const double* base = params_.data();
  Map<const MatrixXd> w1(base + o.w1, h, d);
  Map<const VectorXd> b1(base + o.b1, h);
  Map<const MatrixXd> w2(base + o.w2, h, h);
  Map<const VectorXd> b2(base + o.b2, h);
  Map<const MatrixXd> wp(base + o.wp, a, h);
  Map<const VectorXd> bp(base + o.bp, a);
  Map<const Eigen::RowVectorXd> wv(base + o.wv, h);
  const double bv = base[o.bv];

  ForwardCache c;
  c.input = observations;
  c.hidden1 = ((w1 * observations).colwise() + b1).array().tanh().matrix();
  c.hidden2 = ((w2 * c.hidden1).colwise() + b2).array().tanh().matrix();
  c.logits = (wp * c.hidden2).colwise() + bp;
  c.values = (wv * c.hidden2).array() + bv;
  return c;
}

VectorXd MlpPolicy::backward(const ForwardCache& c, const MatrixXd& dlogits,
                             const Eigen::RowVectorXd& dvalues) const {
  const auto o = offsets();
  const int d = shape_.observation_size, h = shape_.hidden, a = shape_.actions;
  const double* base = params_.data();
  Map<const MatrixXd> w2(base + o.w2, h, h);
  Map<const MatrixXd> wp(base + o.wp, a, h);
  Map<const VectorXd> wv(base + o.wv, h);

  VectorXd grad = VectorXd::Zero(params_.size());
  double* g = grad.data();
  Map<MatrixXd>(g + o.wp, a, h) = dlogits * c.hidden2.transpose();
  Map<VectorXd>(g + o.bp, a) = dlogits.rowwise().sum();
  Map<Eigen::RowVectorXd>(g + o.wv, h) = dvalues * c.hidden2.transpose();
  g[o.bv] = dvalues.sum();

  MatrixXd dh2 = wp.transpose() * dlogits + wv * dvalues;
  dh2.array() *= (1.0 - c.hidden2.array().square());
  Map<MatrixXd>(g + o.w2, h, h) = dh2 * c.hidden1.transpose();
  Map<VectorXd>(g + o.b2, h) = dh2.rowwise().sum();

  MatrixXd dh1 = w2.transpose() * dh2;
  dh1.array() *= (1.0 - c.hidden1.array().square());
  Map<MatrixXd>(g + o.w1, h, d) = dh1 * c.input.transpose();
  Map<VectorXd>(g + o.b1, h) = dh1.rowwise().sum();
  return grad;
}

PolicyOutput MlpPolicy::evaluate(std::span<const double> observation) const {
  MatrixXd x = Map<const MatrixXd>(observation.data(), static_cast<Eigen::Index>(observation.size()), 1);
  const auto c = forward(x);
  PolicyOutput out;
  out.logits.assign(c.logits.data(), c.logits.data() + c.logits.size());
  out.value = c.values(0);
  return out;
}

}  // namespace ued::learn
