#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "ued/core/pomdp.hpp"
#include "ued/core/trajectory.hpp"
#include "ued/minigrid/maze_level.hpp"
#include "ued/minigrid/student_env.hpp"

namespace ued::regret {

enum class Estimator { kRelativeRegret, kFlexibleRegret, kPositiveValueLoss, kTrueRegret };

std::string to_string(Estimator e);

struct LevelScore {
  double value = 0.0;
  Estimator estimator = Estimator::kRelativeRegret;
  std::uint64_t level_hash = 0;
  std::int64_t step = 0;

  // Throws std::invalid_argument if value is not finite.
  static LevelScore make(double value, Estimator estimator, std::uint64_t level_hash,
                         std::int64_t step);
};

// V_A - V_P; may be negative.
inline double relative_regret(double return_a, double return_p) { return return_a - return_p; }

enum class Role { kA, kP };

struct FlexibleRegret {
  double score = 0.0;
  Role antagonist = Role::kA;
};

// |V_A - V_P|; the better student is the antagonist, ties go to A.
FlexibleRegret flexible_regret(double return_a, double return_p);

// (1/T) sum_t max(sum_{k>=t} (gamma lambda)^(k-t) delta_k, 0). Empty input -> 0.
double positive_value_loss(std::span<const double> deltas, double gamma, double lambda);

// PVL of a trajectory, with deltas from its recorded rewards and value estimates.
double positive_value_loss(const Trajectory& traj, double gamma, double lambda);

// V*(level) - V(policy) by exact dynamic programming. Throws
// oracle::StateBudgetExceeded on oversized levels.
double true_regret(const minigrid::MazeLevel& level, const Policy& policy,
                   int max_steps = minigrid::kDefaultMaxSteps);

}  // namespace ued::regret
