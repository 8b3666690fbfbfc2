#pragma once

#include <optional>
#include <vector>

#include "ued/core/pomdp.hpp"
#include "ued/core/rng.hpp"
#include "ued/minigrid/maze_level.hpp"

namespace ued::minigrid {

inline constexpr int kNoiseSize = 16;

// How many wall placements the teacher gets per episode.
struct BudgetMode {
  enum class Kind { kFixed, kUniform };
  Kind kind = Kind::kFixed;
  int lo = 25;
  int hi = 25;

  static BudgetMode fixed(int n) { return {Kind::kFixed, n, n}; }
  static BudgetMode uniform(int lo, int hi) { return {Kind::kUniform, lo, hi}; }
  int max_budget() const { return hi; }
  void validate() const;
};

int sample_budget(const BudgetMode& mode, Rng& rng);

// Partially built level. Steps [0, budget) place walls, step budget places the
// goal and step budget + 1 places the agent.
struct DesignerState {
  int width = kDefaultGridSize;
  int height = kDefaultGridSize;
  int budget = 0;
  int t = 0;
  std::vector<std::uint8_t> wall;  // full grid, border set
  std::optional<Cell> goal;
  std::optional<Cell> agent;

  static DesignerState start(int width, int height, int budget);
  int episode_length() const { return budget + 2; }
  bool finished() const { return t >= episode_length(); }
  int action_count() const { return width * height; }
  MazeLevel to_level() const;  // requires finished()
};

// Applies one placement. Cell index is row-major over the full grid.
DesignerState designer_step(DesignerState state, int cell_index);

// Size of the designer observation for a given grid and maximum budget:
// one-hot grid (empty, wall, goal, agent), a one-hot placement slot, noise.
int designer_observation_size(int width, int height, int max_budget);

std::vector<double> encode_designer_observation(const DesignerState& state, int max_budget,
                                                const std::vector<double>& noise);

// The teacher's level-building MDP. Rewards are always zero; the regret is
// written onto the last step by the training loop.
class DesignerEnv : public Pomdp {
 public:
  DesignerEnv(int width, int height, int budget, int max_budget, std::vector<double> noise);

  std::vector<double> reset() override;
  StepResult step(int action) override;
  std::vector<double> observe() const override;
  int observation_size() const override;
  int action_count() const override { return state_.action_count(); }

  const DesignerState& state() const { return state_; }
  MazeLevel level() const { return state_.to_level(); }

 private:
  int max_budget_;
  std::vector<double> noise_;
  DesignerState state_;
};

std::vector<double> sample_noise(Rng& rng);

// A level built by a designer choosing uniformly random cells.
MazeLevel random_level(int width, int height, const BudgetMode& mode, Rng& rng);

}  // namespace ued::minigrid
