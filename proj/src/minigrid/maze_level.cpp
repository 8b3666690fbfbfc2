#include "ued/minigrid/maze_level.hpp"

#include "ued/core/errors.hpp"

namespace ued::minigrid {

namespace {

constexpr int kMinSide = 3;
constexpr int kMaxSide = 64;
constexpr std::size_t kHeaderLength = 7;

}  // namespace

Cell step_forward(Cell c, Direction d) {
  switch (d) {
    case Direction::kRight: return {c.row, c.col + 1};
    case Direction::kDown: return {c.row + 1, c.col};
    case Direction::kLeft: return {c.row, c.col - 1};
    case Direction::kUp: return {c.row - 1, c.col};
  }
  return c;
}

Direction turn_left(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 3) % 4); }
Direction turn_right(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 1) % 4); }

std::string to_string(Direction d) {
  switch (d) {
    case Direction::kRight: return "right";
    case Direction::kDown: return "down";
    case Direction::kLeft: return "left";
    case Direction::kUp: return "up";
  }
  return "?";
}

MazeLevel::MazeLevel(int width, int height)
    : width_(width),
      height_(height),
      wall_(static_cast<std::size_t>(width) * height, 0),
      agent_pos_{1, 1},
      goal_pos_{height - 2, width - 2} {
  if (width < kMinSide || height < kMinSide || width > kMaxSide || height > kMaxSide) {
    throw FieldError(width < kMinSide || width > kMaxSide ? "width" : "height",
                     "grid side must be in [3, 64]");
  }
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      if (!is_interior({r, c})) wall_[static_cast<std::size_t>(r) * width_ + c] = 1;
    }
  }
}

bool MazeLevel::in_bounds(Cell c) const {
  return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_;
}

bool MazeLevel::is_interior(Cell c) const {
  return c.row >= 1 && c.col >= 1 && c.row < height_ - 1 && c.col < width_ - 1;
}

bool MazeLevel::is_wall(Cell c) const {
  if (!in_bounds(c)) return true;
  return wall_[static_cast<std::size_t>(c.row) * width_ + c.col] != 0;
}

void MazeLevel::set_wall(Cell c, bool wall) {
  if (!is_interior(c)) return;
  wall_[static_cast<std::size_t>(c.row) * width_ + c.col] = wall ? 1 : 0;
}

std::vector<Cell> MazeLevel::walls() const {
  std::vector<Cell> out;
  for (int r = 1; r < height_ - 1; ++r) {
    for (int c = 1; c < width_ - 1; ++c) {
      if (is_wall({r, c})) out.push_back({r, c});
    }
  }
  return out;
}

void MazeLevel::validate() const {
  if (!is_interior(agent_pos_)) throw FieldError("agent", "must be an interior cell");
  if (!is_interior(goal_pos_)) throw FieldError("goal", "must be an interior cell");
  if (agent_pos_ == goal_pos_) throw FieldError("goal", "must differ from the agent cell");
  if (is_wall(agent_pos_)) throw FieldError("agent", "placed on a wall");
  if (is_wall(goal_pos_)) throw FieldError("goal", "placed on a wall");
  const int d = static_cast<int>(agent_dir_);
  if (d < 0 || d > 3) throw FieldError("agent_dir", "must be one of 0..3");
}

bool MazeLevel::is_valid() const noexcept {
  try {
    validate();
    return true;
  } catch (const FieldError&) {
    return false;
  }
}

LevelParams MazeLevel::to_params() const {
  LevelParams p;
  p.env_id = kEnvId;
  p.theta = {width_,         height_,        agent_pos_.row, agent_pos_.col,
             static_cast<int>(agent_dir_), goal_pos_.row, goal_pos_.col};
  for (int r = 1; r < height_ - 1; ++r) {
    for (int c = 1; c < width_ - 1; ++c) p.theta.push_back(is_wall({r, c}) ? 1 : 0);
  }
  return p;
}

MazeLevel MazeLevel::from_params(const LevelParams& params) {
  if (params.env_id != kEnvId) throw FieldError("env_id", "expected " + std::string(kEnvId));
  const auto& th = params.theta;
  if (th.size() < kHeaderLength) throw FieldError("theta", "too short for a maze header");
  auto side = [](std::int64_t v, const char* name) {
    if (v < kMinSide || v > kMaxSide) throw FieldError(name, "grid side must be in [3, 64]");
    return static_cast<int>(v);
  };
  MazeLevel level(side(th[0], "width"), side(th[1], "height"));
  const std::size_t interior = static_cast<std::size_t>(level.interior_cell_count());
  if (th.size() != kHeaderLength + interior) {
    throw FieldError("walls", "expected " + std::to_string(interior) + " wall bits");
  }
  if (th[4] < 0 || th[4] > 3) throw FieldError("agent_dir", "must be one of 0..3");
  level.agent_pos_ = {static_cast<int>(th[2]), static_cast<int>(th[3])};
  level.agent_dir_ = static_cast<Direction>(th[4]);
  level.goal_pos_ = {static_cast<int>(th[5]), static_cast<int>(th[6])};
  std::size_t k = kHeaderLength;
  for (int r = 1; r < level.height_ - 1; ++r) {
    for (int c = 1; c < level.width_ - 1; ++c, ++k) {
      if (th[k] != 0 && th[k] != 1) throw FieldError("walls", "wall bits must be 0 or 1");
      level.set_wall({r, c}, th[k] == 1);
    }
  }
  level.validate();
  return level;
}

}  // namespace ued::minigrid
