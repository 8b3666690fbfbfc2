#pragma once

#include "ued/minigrid/maze_level.hpp"

namespace ued::minigrid {

// BFS distance over 4-connected moves from agent to goal, ignoring heading;
// 0 when the goal cannot be reached.
int shortest_path_len(const MazeLevel& level);

int block_count(const MazeLevel& level);

// Flood-fill reachability (independent of shortest_path_len).
bool is_solvable(const MazeLevel& level);

}  // namespace ued::minigrid
