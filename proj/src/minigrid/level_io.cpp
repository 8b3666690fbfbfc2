#include "ued/minigrid/level_io.hpp"

#include <fstream>
#include <sstream>

#include "ued/core/errors.hpp"

namespace ued::minigrid {

namespace {

int as_int(const nlohmann::json& j, const char* field) {
  if (!j.is_number_integer()) throw FieldError(field, "expected an integer");
  return j.get<int>();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

nlohmann::ordered_json level_to_json(const MazeLevel& level) {
  nlohmann::ordered_json j;
  j["version"] = kLevelFormatVersion;
  j["width"] = level.width();
  j["height"] = level.height();
  auto walls = nlohmann::ordered_json::array();
  for (Cell c : level.walls()) walls.push_back({c.row, c.col});
  j["walls"] = std::move(walls);
  j["agent"] = {level.agent_pos().row, level.agent_pos().col, static_cast<int>(level.agent_dir())};
  j["goal"] = {level.goal_pos().row, level.goal_pos().col};
  return j;
}

MazeLevel level_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FieldError("level", "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "version" && key != "width" && key != "height" && key != "walls" &&
        key != "agent" && key != "goal") {
      throw FieldError(key, "unknown field");
    }
  }
  for (const char* key : {"version", "width", "height", "walls", "agent", "goal"}) {
    if (!j.contains(key)) throw FieldError(key, "missing");
  }
  if (as_int(j["version"], "version") != kLevelFormatVersion) {
    throw FieldError("version", "unsupported level format version");
  }
  MazeLevel level(as_int(j["width"], "width"), as_int(j["height"], "height"));
  if (!j["walls"].is_array()) throw FieldError("walls", "expected an array");
  for (const auto& w : j["walls"]) {
    if (!w.is_array() || w.size() != 2) throw FieldError("walls", "entries must be [row, col]");
    const Cell c{as_int(w[0], "walls"), as_int(w[1], "walls")};
    if (!level.is_interior(c)) throw FieldError("walls", "wall outside the interior");
    level.set_wall(c, true);
  }
  const auto& a = j["agent"];
  if (!a.is_array() || a.size() != 3) throw FieldError("agent", "expected [row, col, dir]");
  const int dir = as_int(a[2], "agent");
  if (dir < 0 || dir > 3) throw FieldError("agent_dir", "must be one of 0..3");
  level.set_agent({as_int(a[0], "agent"), as_int(a[1], "agent")}, static_cast<Direction>(dir));
  const auto& g = j["goal"];
  if (!g.is_array() || g.size() != 2) throw FieldError("goal", "expected [row, col]");
  level.set_goal({as_int(g[0], "goal"), as_int(g[1], "goal")});
  level.validate();
  return level;
}

std::string to_level_text(const MazeLevel& level) { return level_to_json(level).dump() + "\n"; }

MazeLevel parse_level_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FieldError("level", std::string("not valid JSON: ") + e.what());
  }
  return level_from_json(j);
}

void save_level(const std::filesystem::path& path, const MazeLevel& level) {
  write_file(path, to_level_text(level));
}

MazeLevel load_level(const std::filesystem::path& path) { return parse_level_text(read_file(path)); }

void save_levels(const std::filesystem::path& path, const std::vector<MazeLevel>& levels) {
  std::string text;
  for (const auto& l : levels) text += to_level_text(l);
  write_file(path, text);
}

std::vector<MazeLevel> load_levels(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<MazeLevel> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_level_text(line));
  }
  return out;
}

std::string render_ascii(const MazeLevel& level) {
  static constexpr char kArrows[] = {'>', 'v', '<', '^'};
  std::string out;
  for (int r = 0; r < level.height(); ++r) {
    for (int c = 0; c < level.width(); ++c) {
      const Cell cell{r, c};
      if (cell == level.agent_pos()) {
        out += kArrows[static_cast<int>(level.agent_dir())];
      } else if (cell == level.goal_pos()) {
        out += 'G';
      } else {
        out += level.is_wall(cell) ? '#' : '.';
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace ued::minigrid
