#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "ued/core/rng.hpp"
#include "ued/core/trajectory.hpp"
#include "ued/learn/mlp.hpp"

namespace ued::learn {

// Defaults are the MiniGrid column of the hyperparameter table.
struct PpoConfig {
  double gamma = 0.995;
  double gae_lambda = 0.95;
  double clip_range = 0.2;
  int epochs = 5;
  int minibatches = 1;
  double learning_rate = 1e-4;
  double adam_epsilon = 1e-5;
  double max_grad_norm = 0.5;
  double value_loss_coef = 0.5;
  double entropy_coef = 0.0;
  bool clip_value = true;
  bool normalize_returns = false;
  int workers = 32;
  int rollout_length = 256;

  void validate() const;  // throws FieldError
};

enum class DistillDirection { kOff, kUnidirectional, kBidirectional };

DistillDirection parse_distill_direction(const std::string& name);
std::string to_string(DistillDirection d);

struct DistillConfig {
  double kl_coef = 0.0;
  int kl_interval = 1;  // in minibatch updates
  DistillDirection direction = DistillDirection::kOff;

  void validate() const;
};

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  std::int64_t step = 0;  // also the lifetime count of minibatch updates

  static AdamState for_policy(const MlpPolicy& policy);
};

// Online distillation towards a frozen snapshot of another policy.
struct Distillation {
  const MlpPolicy* target = nullptr;
  DistillConfig config;
};

struct LossCoefficients {
  double policy = 1.0;
  double value = 0.5;
  double entropy = 0.0;
  double kl = 0.0;
};

struct LossEvaluation {
  double total = 0.0;
  double policy_loss = 0.0;  // clipped surrogate, negated
  double value_loss = 0.0;
  double entropy = 0.0;
  double kl = 0.0;  // KL(target || policy), 0 without a target
  double approx_kl = 0.0;
  Eigen::VectorXd gradient;
};

// Loss on the samples `indices` of `batch`, with `advantages` indexed by batch
// position:
//   coef.policy * L_clip + coef.value * L_value - coef.entropy * H + coef.kl * KL
LossEvaluation evaluate_loss(const MlpPolicy& policy, const RolloutBatch& batch,
                             std::span<const std::size_t> indices,
                             std::span<const double> advantages, double clip_range, bool clip_value,
                             const LossCoefficients& coef, const MlpPolicy* kl_target);

struct LossReport {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double distill_kl = 0.0;  // mean over the minibatches that carried the term
  int minibatch_updates = 0;
  int kl_updates = 0;
};

class NonFiniteLoss : public std::runtime_error {
 public:
  NonFiniteLoss(std::string term, const std::string& what)
      : std::runtime_error(what), term_(std::move(term)) {}
  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

// Normalises advantages to mean 0 / std 1 (std floored at 1e-8).
std::vector<double> normalized_advantages(std::span<const double> advantages);

// epochs x minibatches Adam steps. Minibatch update k (counted over the life of
// `adam`, 1-based) carries the distillation term iff k % kl_interval == 0.
// On a non-finite loss the policy and optimizer are restored and
// NonFiniteLoss is thrown.
LossReport ppo_update(MlpPolicy& policy, AdamState& adam, const RolloutBatch& batch,
                      const PpoConfig& cfg, Rng& rng, const Distillation* distill = nullptr);

// Running variance of discounted returns used to rescale rewards.
class ReturnNormalizer {
 public:
  void update(double discounted_return);
  double scale() const;  // 1 / sqrt(var + 1e-8); 1 before any data
  double mean = 0.0;
  double m2 = 0.0;
  std::int64_t count = 0;
};

// Flattens trajectories and fills advantages/returns with GAE. Rewards are
// rescaled first when a normaliser is supplied.
RolloutBatch make_batch(std::span<const Trajectory> trajectories, double gamma, double lambda,
                        ReturnNormalizer* normalizer = nullptr);

}  // namespace ued::learn
