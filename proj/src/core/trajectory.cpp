#include "ued/core/trajectory.hpp"

#include <stdexcept>

namespace ued {

bool Trajectory::well_formed() const {
  const auto t = actions.size();
  return observations.size() == t && log_probs.size() == t && rewards.size() == t &&
         values.size() == t + 1;
}

std::span<const double> RolloutBatch::observation(std::size_t i) const {
  return {observations.data() + i * observation_size,
          static_cast<std::size_t>(observation_size)};
}

void RolloutBatch::append(const Trajectory& traj) {
  if (!traj.well_formed()) throw std::invalid_argument("append: malformed trajectory");
  for (const auto& obs : traj.observations) {
    if (observation_size == 0 && size() == 0) observation_size = static_cast<int>(obs.size());
    if (static_cast<int>(obs.size()) != observation_size) {
      throw std::invalid_argument("append: observation size mismatch");
    }
    observations.insert(observations.end(), obs.begin(), obs.end());
  }
  actions.insert(actions.end(), traj.actions.begin(), traj.actions.end());
  log_probs.insert(log_probs.end(), traj.log_probs.begin(), traj.log_probs.end());
  rewards.insert(rewards.end(), traj.rewards.begin(), traj.rewards.end());
  values.insert(values.end(), traj.values.begin(), traj.values.end() - 1);
  boundaries.push_back(actions.size());
}

bool RolloutBatch::partitions_exactly() const {
  if (boundaries.empty() || boundaries.front() != 0 || boundaries.back() != size()) return false;
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (boundaries[i] < boundaries[i - 1]) return false;
  }
  const auto n = size();
  return log_probs.size() == n && values.size() == n && rewards.size() == n &&
         observations.size() == n * static_cast<std::size_t>(observation_size) &&
         (advantages.empty() || advantages.size() == n) && (returns.empty() || returns.size() == n);
}

RolloutBatch flatten(std::span<const Trajectory> trajectories) {
  RolloutBatch batch;
  for (const auto& t : trajectories) batch.append(t);
  return batch;
}

}  // namespace ued
