#include "ued/core/rollout.hpp"

#include <cmath>
#include <stdexcept>

#include "ued/core/categorical.hpp"

namespace ued {

Trajectory rollout(const Policy& policy, Pomdp& pomdp, int max_steps, Rng& rng,
                   StepCounter* counter) {
  if (max_steps < 1) throw std::invalid_argument("rollout: max_steps must be >= 1");
  Trajectory traj;
  std::vector<double> obs = pomdp.reset();
  bool terminated = false;
  for (int t = 0; t < max_steps; ++t) {
    const PolicyOutput out = policy.evaluate(obs);
    const auto logp = log_softmax(out.logits);
    std::vector<double> probs(logp.size());
    for (std::size_t a = 0; a < logp.size(); ++a) probs[a] = std::exp(logp[a]);
    const int action = static_cast<int>(sample_index(rng, probs));

    traj.observations.push_back(std::move(obs));
    traj.actions.push_back(action);
    traj.log_probs.push_back(logp[action]);
    traj.values.push_back(out.value);

    StepResult step = pomdp.step(action);
    traj.rewards.push_back(step.reward);
    obs = std::move(step.observation);
    if (step.terminated) {
      terminated = true;
      break;
    }
    if (step.truncated) break;
  }
  if (counter) counter->add(traj.length());
  traj.done = terminated;
  traj.values.push_back(terminated ? 0.0 : policy.evaluate(obs).value);
  return traj;
}

double undiscounted_return(const Trajectory& traj) {
  double total = 0.0;
  for (double r : traj.rewards) total += r;
  return total;
}

}  // namespace ued
