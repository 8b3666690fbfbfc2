#include "ued/regret/regret.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ued/learn/gae.hpp"
#include "ued/oracle/oracle.hpp"

namespace ued::regret {

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::kRelativeRegret: return "relative_regret";
    case Estimator::kFlexibleRegret: return "flexible_regret";
    case Estimator::kPositiveValueLoss: return "positive_value_loss";
    case Estimator::kTrueRegret: return "true_regret";
  }
  return "unknown";
}

LevelScore LevelScore::make(double value, Estimator estimator, std::uint64_t level_hash,
                            std::int64_t step) {
  if (!std::isfinite(value)) throw std::invalid_argument("level score must be finite");
  return {value, estimator, level_hash, step};
}

FlexibleRegret flexible_regret(double return_a, double return_p) {
  return {std::abs(return_a - return_p), return_p > return_a ? Role::kP : Role::kA};
}

double positive_value_loss(std::span<const double> deltas, double gamma, double lambda) {
  if (deltas.empty()) return 0.0;
  const double decay = gamma * lambda;
  double suffix = 0.0;
  double total = 0.0;
  for (std::size_t i = deltas.size(); i-- > 0;) {
    suffix = deltas[i] + decay * suffix;
    total += std::max(suffix, 0.0);
  }
  return total / static_cast<double>(deltas.size());
}

double positive_value_loss(const Trajectory& traj, double gamma, double lambda) {
  const auto deltas = learn::td_residuals(traj.rewards, traj.values, traj.done, gamma);
  return positive_value_loss(deltas, gamma, lambda);
}

double true_regret(const minigrid::MazeLevel& level, const Policy& policy, int max_steps) {
  const double best = oracle::optimal_return(level, max_steps);
  const double achieved =
      oracle::exact_policy_value(level, oracle::observation_policy(policy, level), max_steps);
  return best - achieved;
}

}  // namespace ued::regret
