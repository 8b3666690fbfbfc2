#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "ued/core/pomdp.hpp"
#include "ued/core/rng.hpp"

namespace ued::learn {

struct MlpShape {
  int observation_size = 0;
  int hidden = 64;
  int actions = 0;

  std::size_t parameter_count() const;
  friend bool operator==(const MlpShape&, const MlpShape&) = default;
};

// Activations kept for the backward pass. Samples are columns.
struct ForwardCache {
  Eigen::MatrixXd input;
  Eigen::MatrixXd hidden1;
  Eigen::MatrixXd hidden2;
  Eigen::MatrixXd logits;   // actions x batch
  Eigen::RowVectorXd values;
};

// Shared two-layer tanh trunk with a linear policy head and a linear value
// head. All parameters live in one flat vector:
//   W1 (H x D), b1 (H), W2 (H x H), b2 (H), Wp (A x H), bp (A), wv (H), bv (1)
// with matrices stored column-major.
class MlpPolicy : public Policy {
 public:
  MlpPolicy() = default;
  explicit MlpPolicy(MlpShape shape);  // all-zero parameters

  // Scaled-normal init; the policy head starts near uniform.
  static MlpPolicy initialized(MlpShape shape, Rng& rng);

  const MlpShape& shape() const { return shape_; }
  Eigen::VectorXd& parameters() { return params_; }
  const Eigen::VectorXd& parameters() const { return params_; }

  PolicyOutput evaluate(std::span<const double> observation) const override;

  // observations: observation_size x batch.
  ForwardCache forward(const Eigen::MatrixXd& observations) const;
  // Gradient of a scalar loss given its partials w.r.t. logits and values.
  Eigen::VectorXd backward(const ForwardCache& cache, const Eigen::MatrixXd& dlogits,
                           const Eigen::RowVectorXd& dvalues) const;

  bool all_finite() const { return params_.allFinite(); }

 private:
  struct Offsets {
    std::size_t w1, b1, w2, b2, wp, bp, wv, bv, end;
  };
  Offsets offsets() const;

  MlpShape shape_{};
  Eigen::VectorXd params_;
};

}  // namespace ued::learn
