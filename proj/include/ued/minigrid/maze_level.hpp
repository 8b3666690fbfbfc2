#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "ued/core/level_params.hpp"

namespace ued::minigrid {

inline constexpr const char* kEnvId = "minigrid-maze";
inline constexpr int kDefaultGridSize = 13;

// Headings in MiniGrid order: right, down, left, up.
enum class Direction : int { kRight = 0, kDown = 1, kLeft = 2, kUp = 3 };

struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

Cell step_forward(Cell c, Direction d);
Direction turn_left(Direction d);
Direction turn_right(Direction d);
std::string to_string(Direction d);

// One assignment of the maze's free parameters. The outer ring is always wall;
// only interior cells carry a wall bit.
class MazeLevel {
 public:
  MazeLevel() : MazeLevel(kDefaultGridSize, kDefaultGridSize) {}
  // Empty interior, agent top-left facing right, goal bottom-right.
  MazeLevel(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Cell c) const;
  bool is_interior(Cell c) const;
  // Out-of-bounds and border cells count as walls.
  bool is_wall(Cell c) const;
  // Border or out-of-range cells are ignored.
  void set_wall(Cell c, bool wall);

  Cell agent_pos() const { return agent_pos_; }
  Direction agent_dir() const { return agent_dir_; }
  Cell goal_pos() const { return goal_pos_; }
  void set_agent(Cell c, Direction d) { agent_pos_ = c; agent_dir_ = d; }
  void set_goal(Cell c) { goal_pos_ = c; }

  // Interior wall cells in row-major order.
  std::vector<Cell> walls() const;
  int interior_cell_count() const { return (width_ - 2) * (height_ - 2); }

  // Throws FieldError naming the violated field.
  void validate() const;
  bool is_valid() const noexcept;

  LevelParams to_params() const;
  static MazeLevel from_params(const LevelParams& params);
  std::uint64_t hash() const { return to_params().hash(); }

  friend bool operator==(const MazeLevel&, const MazeLevel&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> wall_;  // full grid, row-major; border stays 1
  Cell agent_pos_;
  Direction agent_dir_ = Direction::kRight;
  Cell goal_pos_;
};

}  // namespace ued::minigrid
