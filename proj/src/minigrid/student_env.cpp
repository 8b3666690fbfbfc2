#include "ued/minigrid/student_env.hpp"

#include "ued/core/errors.hpp"

namespace ued::minigrid {

Cell view_cell(Cell pos, Direction dir, int forward, int lateral) {
  const Cell f = step_forward({0, 0}, dir);
  const Cell r = step_forward({0, 0}, turn_right(dir));
  return {pos.row + forward * f.row + lateral * r.row, pos.col + forward * f.col + lateral * r.col};
}

std::vector<double> encode_observation(const MazeLevel& level, Cell pos, Direction dir) {
  std::vector<double> obs(kObservationSize, 0.0);
  constexpr int half = kViewSize / 2;
  for (int fwd = 0; fwd < kViewSize; ++fwd) {
    for (int lat = -half; lat <= half; ++lat) {
      const Cell c = view_cell(pos, dir, fwd, lat);
      CellCategory cat = CellCategory::kEmpty;
      if (!level.in_bounds(c)) {
        cat = CellCategory::kOutOfBounds;
      } else if (level.is_wall(c)) {
        cat = CellCategory::kWall;
      } else if (c == level.goal_pos()) {
        cat = CellCategory::kGoal;
      }
      const int slot = fwd * kViewSize + (lat + half);
      obs[slot * kCellCategories + static_cast<int>(cat)] = 1.0;
    }
  }
  obs[kViewSize * kViewSize * kCellCategories + static_cast<int>(dir)] = 1.0;
  return obs;
}

MazeEnv::MazeEnv(MazeLevel level, int max_steps) : level_(std::move(level)), max_steps_(max_steps) {
  level_.validate();
  if (max_steps_ < 1) throw FieldError("max_steps", "must be >= 1");
  reset();
}

std::vector<double> MazeEnv::reset() {
  state_ = {level_.agent_pos(), level_.agent_dir()};
  elapsed_ = 0;
  finished_ = false;
  return observe();
}

std::vector<double> MazeEnv::observe() const {
  return encode_observation(level_, state_.pos, state_.dir);
}

StepResult MazeEnv::step(int action) {
  if (action < 0 || action >= kStudentActions) {
    throw FieldError("action", "must be 0 (left), 1 (right) or 2 (forward)");
  }
  if (finished_) throw std::logic_error("MazeEnv::step on a finished episode");
  switch (static_cast<StudentAction>(action)) {
    case StudentAction::kLeft: state_.dir = turn_left(state_.dir); break;
    case StudentAction::kRight: state_.dir = turn_right(state_.dir); break;
    case StudentAction::kForward: {
      const Cell next = step_forward(state_.pos, state_.dir);
      if (!level_.is_wall(next)) state_.pos = next;
      break;
    }
  }
  ++elapsed_;
  StepResult out;
  if (state_.pos == level_.goal_pos()) {
    out.reward = goal_reward(elapsed_, max_steps_);
    out.terminated = true;
  } else if (elapsed_ >= max_steps_) {
    out.truncated = true;
  }
  finished_ = out.terminated || out.truncated;
  out.observation = observe();
  return out;
}

void register_environment(EnvRegistry& registry, int max_steps) {
  registry.add(kEnvId, [max_steps](const LevelParams& params, std::uint64_t) {
    // The maze is deterministic; the seed is accepted for interface uniformity.
    return std::make_unique<MazeEnv>(MazeLevel::from_params(params), max_steps);
  });
}

}  // namespace ued::minigrid
