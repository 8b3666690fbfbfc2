#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ued/minigrid/maze_level.hpp"

namespace ued::minigrid {

inline constexpr int kLevelFormatVersion = 1;

// {version, width, height, walls: [[r,c]...] sorted, agent: [r,c,dir], goal: [r,c]}
nlohmann::ordered_json level_to_json(const MazeLevel& level);
MazeLevel level_from_json(const nlohmann::json& j);

// Canonical single-line text; parse(to_text(x)) == x and re-serialising any
// accepted input yields identical bytes.
std::string to_level_text(const MazeLevel& level);
MazeLevel parse_level_text(std::string_view text);

void save_level(const std::filesystem::path& path, const MazeLevel& level);
MazeLevel load_level(const std::filesystem::path& path);

// An array file holds one level per line.
void save_levels(const std::filesystem::path& path, const std::vector<MazeLevel>& levels);
std::vector<MazeLevel> load_levels(const std::filesystem::path& path);

// ASCII view: '#' wall, 'G' goal, agent as '>', 'v', '<', '^'.
std::string render_ascii(const MazeLevel& level);

}  // namespace ued::minigrid
