#include "ued/minigrid/designer.hpp"

#include <algorithm>
#include <stdexcept>

#include "ued/core/errors.hpp"

namespace ued::minigrid {

namespace {

constexpr int kDesignerCategories = 4;  // empty, wall, goal, agent

Cell clamp_interior(const DesignerState& s, Cell c) {
  return {std::clamp(c.row, 1, s.height - 2), std::clamp(c.col, 1, s.width - 2)};
}

std::size_t index_of(const DesignerState& s, Cell c) {
  return static_cast<std::size_t>(c.row) * s.width + c.col;
}

}  // namespace

void BudgetMode::validate() const {
  if (lo < 0) throw FieldError("budget", "must be >= 0");
  if (hi < lo) throw FieldError("budget_max", "must be >= budget_min");
  if (kind == Kind::kFixed && lo != hi) throw FieldError("budget", "fixed mode needs lo == hi");
}

int sample_budget(const BudgetMode& mode, Rng& rng) {
  if (mode.kind == BudgetMode::Kind::kFixed) return mode.lo;
  return uniform_int(rng, mode.lo, mode.hi);
}

DesignerState DesignerState::start(int width, int height, int budget) {
  if (budget < 0) throw FieldError("budget", "must be >= 0");
  const MazeLevel shape(width, height);  // validates the side lengths
  DesignerState s;
  s.width = width;
  s.height = height;
  s.budget = budget;
  s.wall.assign(static_cast<std::size_t>(width) * height, 0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (!shape.is_interior({r, c})) s.wall[index_of(s, {r, c})] = 1;
    }
  }
  return s;
}

MazeLevel DesignerState::to_level() const {
  if (!finished() || !goal || !agent) throw std::logic_error("designer episode not finished");
  MazeLevel level(width, height);
  for (int r = 1; r < height - 1; ++r) {
    for (int c = 1; c < width - 1; ++c) level.set_wall({r, c}, wall[index_of(*this, {r, c})] != 0);
  }
  level.set_goal(*goal);
  level.set_agent(*agent, Direction::kRight);
  level.validate();
  return level;
}

DesignerState designer_step(DesignerState s, int cell_index) {
  if (cell_index < 0 || cell_index >= s.action_count()) {
    throw FieldError("action", "cell index must be in [0, " + std::to_string(s.action_count()) + ")");
  }
  if (s.finished()) throw std::logic_error("designer_step on a finished episode");
  const Cell target{cell_index / s.width, cell_index % s.width};
  const bool interior = target.row >= 1 && target.col >= 1 && target.row < s.height - 1 &&
                        target.col < s.width - 1;
  if (s.t < s.budget) {
    if (interior) s.wall[index_of(s, target)] = 1;
  } else if (s.t == s.budget) {
    const Cell g = clamp_interior(s, target);
    s.wall[index_of(s, g)] = 0;
    s.goal = g;
  } else {
    Cell a = clamp_interior(s, target);
    if (a == *s.goal) {
      std::optional<Cell> free_cell;
      std::optional<Cell> any_cell;
      for (int r = 1; r < s.height - 1 && !free_cell; ++r) {
        for (int c = 1; c < s.width - 1; ++c) {
          const Cell cand{r, c};
          if (cand == *s.goal) continue;
          if (!any_cell) any_cell = cand;
          if (!s.wall[index_of(s, cand)]) {
            free_cell = cand;
            break;
          }
        }
      }
      a = free_cell ? *free_cell : *any_cell;
    }
    s.wall[index_of(s, a)] = 0;
    s.agent = a;
  }
  ++s.t;
  return s;
}

int designer_observation_size(int width, int height, int max_budget) {
  return kDesignerCategories * width * height + (max_budget + 2) + kNoiseSize;
}

std::vector<double> encode_designer_observation(const DesignerState& s, int max_budget,
                                                const std::vector<double>& noise) {
  const int grid = kDesignerCategories * s.width * s.height;
  std::vector<double> obs(static_cast<std::size_t>(designer_observation_size(s.width, s.height, max_budget)),
                          0.0);
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) {
      const Cell cell{r, c};
      int cat = s.wall[index_of(s, cell)] ? 1 : 0;
      if (s.goal && *s.goal == cell) cat = 2;
      if (s.agent && *s.agent == cell) cat = 3;
      obs[index_of(s, cell) * kDesignerCategories + cat] = 1.0;
    }
  }
  // Wall steps use their own index; goal and agent steps use the two slots past
  // the largest budget, so the phase is always identifiable.
  if (!s.finished()) {
    int slot = s.t;
    if (s.t == s.budget) slot = max_budget;
    if (s.t == s.budget + 1) slot = max_budget + 1;
    obs[grid + slot] = 1.0;
  }
  std::copy(noise.begin(), noise.end(), obs.begin() + grid + max_budget + 2);
  return obs;
}

DesignerEnv::DesignerEnv(int width, int height, int budget, int max_budget,
                         std::vector<double> noise)
    : max_budget_(max_budget), noise_(std::move(noise)), state_(DesignerState::start(width, height, budget)) {
  if (budget > max_budget) throw FieldError("budget", "exceeds max_budget");
  if (noise_.size() != static_cast<std::size_t>(kNoiseSize)) {
    throw FieldError("noise", "expected " + std::to_string(kNoiseSize) + " entries");
  }
}

std::vector<double> DesignerEnv::reset() {
  state_ = DesignerState::start(state_.width, state_.height, state_.budget);
  return observe();
}

std::vector<double> DesignerEnv::observe() const {
  return encode_designer_observation(state_, max_budget_, noise_);
}

int DesignerEnv::observation_size() const {
  return designer_observation_size(state_.width, state_.height, max_budget_);
}

StepResult DesignerEnv::step(int action) {
  state_ = designer_step(std::move(state_), action);
  StepResult out;
  out.terminated = state_.finished();
  out.observation = observe();
  return out;
}

std::vector<double> sample_noise(Rng& rng) {
  std::vector<double> z(kNoiseSize);
  for (double& v : z) v = standard_normal(rng);
  return z;
}

MazeLevel random_level(int width, int height, const BudgetMode& mode, Rng& rng) {
  auto s = DesignerState::start(width, height, sample_budget(mode, rng));
  while (!s.finished()) s = designer_step(std::move(s), uniform_int(rng, 0, s.action_count() - 1));
  return s.to_level();
}

}  // namespace ued::minigrid
