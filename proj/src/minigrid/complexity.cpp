#include "ued/minigrid/complexity.hpp"

#include <deque>
#include <vector>

namespace ued::minigrid {

namespace {

constexpr Direction kAllDirections[] = {Direction::kRight, Direction::kDown, Direction::kLeft,
                                        Direction::kUp};

}  // namespace

int shortest_path_len(const MazeLevel& level) {
  const int w = level.width();
  std::vector<int> dist(static_cast<std::size_t>(w) * level.height(), -1);
  auto at = [&](Cell c) -> int& { return dist[static_cast<std::size_t>(c.row) * w + c.col]; };
  std::deque<Cell> frontier{level.agent_pos()};
  at(level.agent_pos()) = 0;
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop_front();
    if (c == level.goal_pos()) return at(c);
    for (Direction d : kAllDirections) {
      const Cell n = step_forward(c, d);
      if (level.is_wall(n) || at(n) >= 0) continue;
      at(n) = at(c) + 1;
      frontier.push_back(n);
    }
  }
  return 0;
}

int block_count(const MazeLevel& level) { return static_cast<int>(level.walls().size()); }

bool is_solvable(const MazeLevel& level) {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(level.width()) * level.height(), 0);
  std::vector<Cell> stack{level.agent_pos()};
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    auto& mark = seen[static_cast<std::size_t>(c.row) * level.width() + c.col];
    if (mark) continue;
    mark = 1;
    if (c == level.goal_pos()) return true;
    for (Direction d : kAllDirections) {
      const Cell n = step_forward(c, d);
      if (!level.is_wall(n)) stack.push_back(n);
    }
  }
  return false;
}

}  // namespace ued::minigrid
