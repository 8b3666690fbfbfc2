#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ued/core/pomdp.hpp"
#include "ued/core/trajectory.hpp"
#include "ued/minigrid/maze_level.hpp"
#include "ued/minigrid/student_env.hpp"

// Exact desk-scale solvers. Movement rules are re-derived here rather than
// borrowed from MazeEnv so that the two can check each other.
namespace ued::oracle {

using minigrid::Cell;
using minigrid::Direction;
using minigrid::MazeLevel;

// Action probabilities (left, right, forward) as a function of the underlying
// state. Memoryless observation policies reduce to this form because the
// observation is a deterministic function of (cell, heading).
using ActionProbs = std::array<double, 3>;
using StatePolicy = std::function<ActionProbs(Cell, Direction)>;

StatePolicy uniform_policy();
// Evaluates `policy` through the student observation encoder.
StatePolicy observation_policy(const Policy& policy, const MazeLevel& level);
// Deterministic shortest-path policy (ties: forward, left, right).
StatePolicy optimal_state_policy(const MazeLevel& level);

class StateBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  std::int64_t max_work = 200'000'000;  // states x horizon
};

// Fewest student steps to the goal over (cell, heading); -1 if unreachable.
int optimal_steps(const MazeLevel& level);

// V*(level): 1 - T*/Tmax, or 0 when unreachable within Tmax.
double optimal_return(const MazeLevel& level, int max_steps = minigrid::kDefaultMaxSteps);

// Finite-horizon DP over (cell, heading, t) with the policy's exact action
// distribution. Throws StateBudgetExceeded when states x horizon > max_work.
double exact_policy_value(const MazeLevel& level, const StatePolicy& policy,
                          int max_steps = minigrid::kDefaultMaxSteps, OracleLimits limits = {});

// Same recursion with reward 1 on reaching the goal: P(solved within Tmax).
double exact_success_probability(const MazeLevel& level, const StatePolicy& policy,
                                 int max_steps = minigrid::kDefaultMaxSteps,
                                 OracleLimits limits = {});

// Direct O(T^2) double loops with no recursion shortcut.
std::vector<double> brute_force_advantages(std::span<const double> rewards,
                                           std::span<const double> values, bool terminal,
                                           double gamma, double lambda);
double brute_force_pvl(std::span<const double> deltas, double gamma, double lambda);
double brute_force_pvl(const Trajectory& traj, double gamma, double lambda);

// Scripted policy that plays optimally by reading the live environment state;
// it ignores the observation it is given.
class OracleGuidedPolicy : public Policy {
 public:
  explicit OracleGuidedPolicy(const minigrid::MazeEnv& env);
  PolicyOutput evaluate(std::span<const double> observation) const override;

 private:
  const minigrid::MazeEnv& env_;
  StatePolicy table_;
};

}  // namespace ued::oracle
