#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ued {

struct Trajectory {
  std::vector<std::vector<double>> observations;
  std::vector<int> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> values;  // length() + 1; the last entry is the bootstrap
  bool done = false;           // true only when the episode reached a terminal state

  std::size_t length() const { return actions.size(); }
  bool well_formed() const;
};

// N trajectories flattened step-major. Advantages and returns are filled in by
// the learner; boundaries[i]..boundaries[i+1] is trajectory i.
struct RolloutBatch {
  int observation_size = 0;
  std::vector<double> observations;
  std::vector<int> actions;
  std::vector<double> log_probs;
  std::vector<double> values;
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::vector<double> returns;
  std::vector<std::size_t> boundaries{0};

  std::size_t size() const { return actions.size(); }
  std::size_t trajectory_count() const { return boundaries.size() - 1; }
  std::span<const double> observation(std::size_t i) const;

  void append(const Trajectory& traj);
  bool partitions_exactly() const;
};

RolloutBatch flatten(std::span<const Trajectory> trajectories);

}  // namespace ued
