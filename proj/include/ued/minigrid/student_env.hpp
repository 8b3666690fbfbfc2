#pragma once

#include <span>
#include <vector>

#include "ued/core/pomdp.hpp"
#include "ued/minigrid/maze_level.hpp"

namespace ued::minigrid {

inline constexpr int kDefaultMaxSteps = 250;
inline constexpr int kViewSize = 7;
inline constexpr int kCellCategories = 4;  // empty, wall, goal, out-of-bounds
inline constexpr int kObservationSize = kViewSize * kViewSize * kCellCategories + 4;
inline constexpr int kStudentActions = 3;

enum class StudentAction : int { kLeft = 0, kRight = 1, kForward = 2 };

enum class CellCategory : int { kEmpty = 0, kWall = 1, kGoal = 2, kOutOfBounds = 3 };

struct AgentState {
  Cell pos;
  Direction dir = Direction::kRight;
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

// World cell shown at egocentric view position (forward, lateral); forward in
// [0, 6], lateral in [-3, 3] with positive to the agent's right. The agent
// sits at forward 0, lateral 0.
Cell view_cell(Cell pos, Direction dir, int forward, int lateral);

// One-hot 7x7 window anchored with the agent on the near edge, followed by a
// one-hot heading. Walls do not occlude.
std::vector<double> encode_observation(const MazeLevel& level, Cell pos, Direction dir);

// Reward for reaching the goal on the `steps`-th step (1-based).
inline double goal_reward(int steps, int max_steps) {
  return 1.0 - static_cast<double>(steps) / static_cast<double>(max_steps);
}

class MazeEnv : public Pomdp {
 public:
  explicit MazeEnv(MazeLevel level, int max_steps = kDefaultMaxSteps);

  std::vector<double> reset() override;
  StepResult step(int action) override;
  std::vector<double> observe() const override;
  int observation_size() const override { return kObservationSize; }
  int action_count() const override { return kStudentActions; }

  const MazeLevel& level() const { return level_; }
  const AgentState& state() const { return state_; }
  int elapsed_steps() const { return elapsed_; }
  int max_steps() const { return max_steps_; }
  bool finished() const { return finished_; }

 private:
  MazeLevel level_;
  int max_steps_;
  AgentState state_;
  int elapsed_ = 0;
  bool finished_ = false;
};

// Registers the maze environment under kEnvId.
void register_environment(EnvRegistry& registry, int max_steps = kDefaultMaxSteps);

}  // namespace ued::minigrid
