#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ued/minigrid/maze_level.hpp"

namespace ued::minigrid {

struct NamedLevel {
  std::string name;
  MazeLevel level;
};

// Procedural stand-ins for well-known hand-made mazes. Every generator is
// deterministic in its seed and returns a solvable level.
MazeLevel sixteen_rooms(std::uint64_t seed, bool fewer_doors = false);
MazeLevel four_rooms(std::uint64_t seed, int size = kDefaultGridSize);
MazeLevel labyrinth(int variant, int size = kDefaultGridSize);
MazeLevel division_maze(std::uint64_t seed, int size = kDefaultGridSize);
MazeLevel backtracker_maze(std::uint64_t seed, int size = kDefaultGridSize);
MazeLevel comb_corridor(std::uint64_t seed, bool large, int size = kDefaultGridSize);
MazeLevel simple_crossing(std::uint64_t seed, int lines = 5, int size = kDefaultGridSize);

// Kinds: "heldout" (twelve 13x13 analogues), "easy" (twenty small random
// solvable levels), or one of "sixteen_rooms", "four_rooms", "labyrinth",
// "maze", "corridor", "simple_crossing". Throws FieldError("kind") otherwise.
std::vector<NamedLevel> generate_suite(std::string_view kind, std::uint64_t seed);

// Solvable random levels with at most max_walls walls and a shortest path of
// at least min_path.
std::vector<NamedLevel> easy_suite(std::uint64_t seed, int size = 7, int max_walls = 8,
                                   int count = 20, int min_path = 4);

std::vector<std::string> suite_kinds();

}  // namespace ued::minigrid
