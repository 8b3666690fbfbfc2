#include "ued/learn/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ued/core/categorical.hpp"
#include "ued/core/errors.hpp"
#include "ued/learn/gae.hpp"

namespace ued::learn {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdvantageStdFloor = 1e-8;

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw FieldError(field, what);
}

}  // namespace

void PpoConfig::validate() const {
  require(gamma >= 0.0 && gamma <= 1.0, "gamma", "must be in [0, 1]");
  require(gae_lambda >= 0.0 && gae_lambda <= 1.0, "lambda_gae", "must be in [0, 1]");
  require(clip_range > 0.0, "ppo_clip_range", "must be > 0");
  require(epochs >= 1, "ppo_epochs", "must be >= 1");
  require(minibatches >= 1, "ppo_minibatches_per_epoch", "must be >= 1");
  require(learning_rate > 0.0, "adam_learning_rate", "must be > 0");
  require(adam_epsilon > 0.0, "adam_epsilon", "must be > 0");
  require(max_grad_norm > 0.0, "ppo_max_gradient_norm", "must be > 0");
  require(value_loss_coef >= 0.0, "value_loss_coefficient", "must be >= 0");
  require(entropy_coef >= 0.0, "entropy_coefficient", "must be >= 0");
  require(workers >= 1, "ppo_number_of_workers", "must be >= 1");
  require(rollout_length >= 1, "ppo_rollout_length", "must be >= 1");
}

DistillDirection parse_distill_direction(const std::string& name) {
  if (name == "off" || name == "none") return DistillDirection::kOff;
  if (name == "unidirectional") return DistillDirection::kUnidirectional;
  if (name == "bidirectional") return DistillDirection::kBidirectional;
  throw FieldError("kl_loss_direction", "expected off, unidirectional or bidirectional");
}

std::string to_string(DistillDirection d) {
  switch (d) {
    case DistillDirection::kOff: return "off";
    case DistillDirection::kUnidirectional: return "unidirectional";
    case DistillDirection::kBidirectional: return "bidirectional";
  }
  return "off";
}

void DistillConfig::validate() const {
  require(kl_coef >= 0.0, "kl_loss_coefficient", "must be >= 0");
  require(kl_interval >= 1, "kl_loss_interval", "must be >= 1");
}

AdamState AdamState::for_policy(const MlpPolicy& policy) {
  AdamState s;
  s.first_moment = Eigen::VectorXd::Zero(policy.parameters().size());
  s.second_moment = Eigen::VectorXd::Zero(policy.parameters().size());
  return s;
}

LossEvaluation evaluate_loss(const MlpPolicy& policy, const RolloutBatch& batch,
                             std::span<const std::size_t> indices,
                             std::span<const double> advantages, double clip_range, bool clip_value,
                             const LossCoefficients& coef, const MlpPolicy* kl_target) {
  if (batch.returns.size() != batch.size() || advantages.size() != batch.size()) {
    throw std::invalid_argument("evaluate_loss: batch advantages/returns not filled");
  }
  const auto n = static_cast<Eigen::Index>(indices.size());
  const int obs_dim = policy.shape().observation_size;
  if (batch.observation_size != obs_dim) {
    throw FieldError("observation", "batch observation size does not match the policy");
  }
  Eigen::MatrixXd x(obs_dim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto obs = batch.observation(indices[j]);
    x.col(j) = Eigen::Map<const Eigen::VectorXd>(obs.data(), obs_dim);
  }
  const ForwardCache cache = policy.forward(x);
  Eigen::MatrixXd target_logits;
  if (kl_target) target_logits = kl_target->forward(x).logits;

  const int actions = policy.shape().actions;
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(actions, n);
  Eigen::RowVectorXd dvalues = Eigen::RowVectorXd::Zero(n);
  LossEvaluation out;
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;

  std::vector<double> logits(actions);
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t i = indices[j];
    for (int a = 0; a < actions; ++a) logits[a] = cache.logits(a, j);
    const auto logp = log_softmax(logits);
    std::vector<double> p(actions);
    for (int a = 0; a < actions; ++a) p[a] = std::exp(logp[a]);

    // Clipped surrogate.
    const int act = batch.actions[i];
    const double adv = advantages[i];
    const double ratio = std::exp(logp[act] - batch.log_probs[i]);
    const double clipped = std::clamp(ratio, 1.0 - clip_range, 1.0 + clip_range);
    const double s1 = ratio * adv;
    const double s2 = clipped * adv;
    out.policy_loss -= std::min(s1, s2) * inv_n;
    out.approx_kl += (batch.log_probs[i] - logp[act]) * inv_n;
    double dlogp_act = 0.0;
    if (s1 <= s2 || (ratio > 1.0 - clip_range && ratio < 1.0 + clip_range)) dlogp_act = -adv * ratio;
    for (int a = 0; a < actions; ++a) {
      dlogits(a, j) += coef.policy * inv_n * dlogp_act * ((a == act ? 1.0 : 0.0) - p[a]);
    }

    // Entropy bonus.
    double h = 0.0;
    for (int a = 0; a < actions; ++a) h -= p[a] * logp[a];
    out.entropy += h * inv_n;
    for (int a = 0; a < actions; ++a) {
      const double dh = -p[a] * (logp[a] + h);
      dlogits(a, j) -= coef.entropy * inv_n * dh;
    }

    // Value loss.
    const double v = cache.values(j);
    const double ret = batch.returns[i];
    const double v_old = batch.values[i];
    double dv = 0.0;
    if (clip_value) {
      const double diff = v - v_old;
      const double vc = v_old + std::clamp(diff, -clip_range, clip_range);
      const double l1 = (v - ret) * (v - ret);
      const double l2 = (vc - ret) * (vc - ret);
      out.value_loss += 0.5 * std::max(l1, l2) * inv_n;
      if (l1 >= l2) {
        dv = v - ret;
      } else if (diff > -clip_range && diff < clip_range) {
        dv = vc - ret;
      }
    } else {
      out.value_loss += 0.5 * (v - ret) * (v - ret) * inv_n;
      dv = v - ret;
    }
    dvalues(j) = coef.value * inv_n * dv;

    // Distillation: KL(target || policy).
    if (kl_target) {
      std::vector<double> tz(actions);
      for (int a = 0; a < actions; ++a) tz[a] = target_logits(a, j);
      const auto tlogp = log_softmax(tz);
      double kl = 0.0;
      for (int a = 0; a < actions; ++a) {
        const double pt = std::exp(tlogp[a]);
        kl += pt * (tlogp[a] - logp[a]);
        dlogits(a, j) += coef.kl * inv_n * (p[a] - pt);
      }
      out.kl += kl * inv_n;
    }
  }
  out.total = coef.policy * out.policy_loss + coef.value * out.value_loss -
              coef.entropy * out.entropy + coef.kl * out.kl;
  out.gradient = policy.backward(cache, dlogits, dvalues);
  return out;
}

std::vector<double> normalized_advantages(std::span<const double> advantages) {
  std::vector<double> out(advantages.begin(), advantages.end());
  if (out.empty()) return out;
  const double n = static_cast<double>(out.size());
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / n;
  double var = 0.0;
  for (double a : out) var += (a - mean) * (a - mean);
  const double sd = std::max(std::sqrt(var / n), kAdvantageStdFloor);
  for (double& a : out) a = (a - mean) / sd;
  return out;
}

LossReport ppo_update(MlpPolicy& policy, AdamState& adam, const RolloutBatch& batch,
                      const PpoConfig& cfg, Rng& rng, const Distillation* distill) {
  cfg.validate();
  if (distill) distill->config.validate();
  LossReport report;
  if (batch.size() == 0) return report;
  if (batch.advantages.size() != batch.size()) {
    throw std::invalid_argument("ppo_update: batch advantages not filled");
  }
  const bool distill_active = distill && distill->target &&
                              distill->config.direction != DistillDirection::kOff;

  const auto advantages = normalized_advantages(batch.advantages);
  const Eigen::VectorXd params_backup = policy.parameters();
  const AdamState adam_backup = adam;

  std::vector<std::size_t> order(batch.size());
  const std::size_t chunks = std::min<std::size_t>(cfg.minibatches, batch.size());
  double kl_sum = 0.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (chunks > 1) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t begin = c * order.size() / chunks;
      const std::size_t end = (c + 1) * order.size() / chunks;
      const std::span<const std::size_t> idx(order.data() + begin, end - begin);

      ++adam.step;
      const bool with_kl = distill_active && adam.step % distill->config.kl_interval == 0;
      LossCoefficients coef{1.0, cfg.value_loss_coef, cfg.entropy_coef,
                            with_kl ? distill->config.kl_coef : 0.0};
      LossEvaluation loss = evaluate_loss(policy, batch, idx, advantages, cfg.clip_range,
                                          cfg.clip_value, coef, with_kl ? distill->target : nullptr);

      const char* bad = nullptr;
      if (!std::isfinite(loss.policy_loss)) bad = "policy_loss";
      else if (!std::isfinite(loss.value_loss)) bad = "value_loss";
      else if (!std::isfinite(loss.entropy)) bad = "entropy";
      else if (!std::isfinite(loss.kl)) bad = "distill_kl";
      else if (!loss.gradient.allFinite()) bad = "gradient";
      if (bad) {
        policy.parameters() = params_backup;
        adam = adam_backup;
        throw NonFiniteLoss(bad, std::string("ppo_update: non-finite ") + bad);
      }

      Eigen::VectorXd& g = loss.gradient;
      const double norm = g.norm();
      const double clip_coef = cfg.max_grad_norm / (norm + 1e-6);
      if (clip_coef < 1.0) g *= clip_coef;

      adam.first_moment = kAdamBeta1 * adam.first_moment + (1.0 - kAdamBeta1) * g;
      adam.second_moment = kAdamBeta2 * adam.second_moment + (1.0 - kAdamBeta2) * g.cwiseProduct(g);
      const double t = static_cast<double>(adam.step);
      const double bc1 = 1.0 - std::pow(kAdamBeta1, t);
      const double bc2 = 1.0 - std::pow(kAdamBeta2, t);
      const Eigen::ArrayXd denom = adam.second_moment.array().sqrt() / std::sqrt(bc2) + cfg.adam_epsilon;
      policy.parameters().array() -= (cfg.learning_rate / bc1) * adam.first_moment.array() / denom;

      report.policy_loss += loss.policy_loss;
      report.value_loss += loss.value_loss;
      report.entropy += loss.entropy;
      report.approx_kl += loss.approx_kl;
      if (with_kl) {
        kl_sum += loss.kl;
        ++report.kl_updates;
      }
      ++report.minibatch_updates;
    }
  }
  const double m = static_cast<double>(report.minibatch_updates);
  report.policy_loss /= m;
  report.value_loss /= m;
  report.entropy /= m;
  report.approx_kl /= m;
  if (report.kl_updates > 0) report.distill_kl = kl_sum / report.kl_updates;
  return report;
}

void ReturnNormalizer::update(double x) {
  ++count;
  const double d = x - mean;
  mean += d / static_cast<double>(count);
  m2 += d * (x - mean);
}

double ReturnNormalizer::scale() const {
  if (count < 2) return 1.0;
  return 1.0 / std::sqrt(m2 / static_cast<double>(count) + 1e-8);
}

RolloutBatch make_batch(std::span<const Trajectory> trajectories, double gamma, double lambda,
                        ReturnNormalizer* normalizer) {
  double scale = 1.0;
  if (normalizer) {
    for (const auto& t : trajectories) {
      double g = 0.0;
      for (double r : t.rewards) {
        g = gamma * g + r;
        normalizer->update(g);
      }
    }
    scale = normalizer->scale();
  }
  RolloutBatch batch;
  for (const auto& t : trajectories) {
    batch.append(t);
    std::vector<double> rewards = t.rewards;
    for (double& r : rewards) r *= scale;
    const auto g = gae(rewards, t.values, t.done, gamma, lambda);
    batch.advantages.insert(batch.advantages.end(), g.advantages.begin(), g.advantages.end());
    batch.returns.insert(batch.returns.end(), g.returns.begin(), g.returns.end());
    if (normalizer) {
      const std::size_t start = batch.rewards.size() - rewards.size();
      std::copy(rewards.begin(), rewards.end(), batch.rewards.begin() + static_cast<std::ptrdiff_t>(start));
    }
  }
  return batch;
}

}  // namespace ued::learn
