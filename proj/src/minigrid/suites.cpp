#include "ued/minigrid/suites.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ued/core/errors.hpp"
#include "ued/core/rng.hpp"
#include "ued/minigrid/complexity.hpp"
#include "ued/minigrid/designer.hpp"

namespace ued::minigrid {

namespace {

void fill_interior(MazeLevel& level) {
  for (int r = 1; r < level.height() - 1; ++r) {
    for (int c = 1; c < level.width() - 1; ++c) level.set_wall({r, c}, true);
  }
}

void place(MazeLevel& level, Cell agent, Direction dir, Cell goal) {
  level.set_wall(agent, false);
  level.set_wall(goal, false);
  level.set_agent(agent, dir);
  level.set_goal(goal);
  level.validate();
  if (!is_solvable(level)) throw std::logic_error("suite generator produced an unsolvable level");
}

int odd_in(Rng& rng, int lo, int hi) {  // odd value in [lo, hi], lo odd
  return lo + 2 * uniform_int(rng, 0, (hi - lo) / 2);
}

int even_in(Rng& rng, int lo, int hi) {  // even value in [lo, hi], lo even
  return lo + 2 * uniform_int(rng, 0, (hi - lo) / 2);
}

void divide(MazeLevel& level, Rng& rng, int r0, int r1, int c0, int c1) {
  const int h = r1 - r0;
  const int w = c1 - c0;
  if (h < 2 && w < 2) return;
  const bool horizontal = h > w || (h == w && bernoulli(rng, 0.5));
  if (horizontal && h >= 2) {
    const int wr = even_in(rng, r0 + 1, r1 - 1);
    const int gap = odd_in(rng, c0, c1);
    for (int c = c0; c <= c1; ++c) {
      if (c != gap) level.set_wall({wr, c}, true);
    }
    divide(level, rng, r0, wr - 1, c0, c1);
    divide(level, rng, wr + 1, r1, c0, c1);
  } else if (w >= 2) {
    const int wc = even_in(rng, c0 + 1, c1 - 1);
    const int gap = odd_in(rng, r0, r1);
    for (int r = r0; r <= r1; ++r) {
      if (r != gap) level.set_wall({r, wc}, true);
    }
    divide(level, rng, r0, r1, c0, wc - 1);
    divide(level, rng, r0, r1, wc + 1, c1);
  }
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

MazeLevel sixteen_rooms(std::uint64_t seed, bool fewer_doors) {
  constexpr int kSize = 13;
  constexpr int kRooms = 4;
  constexpr int kPitch = 3;  // room side 2 plus one wall
  auto rng = make_rng(seed, {0x16});
  MazeLevel level(kSize, kSize);
  for (int k = 1; k < kRooms; ++k) {
    for (int i = 1; i < kSize - 1; ++i) {
      level.set_wall({k * kPitch, i}, true);
      level.set_wall({i, k * kPitch}, true);
    }
  }
  struct Door {
    int a, b;
    Cell cell;
  };
  std::vector<Door> doors;
  for (int rr = 0; rr < kRooms; ++rr) {
    for (int rc = 0; rc < kRooms; ++rc) {
      const int top = rr * kPitch + 1;
      const int left = rc * kPitch + 1;
      if (rc + 1 < kRooms) {
        doors.push_back({rr * kRooms + rc, rr * kRooms + rc + 1,
                         {top + uniform_int(rng, 0, 1), (rc + 1) * kPitch}});
      }
      if (rr + 1 < kRooms) {
        doors.push_back({rr * kRooms + rc, (rr + 1) * kRooms + rc,
                         {(rr + 1) * kPitch, left + uniform_int(rng, 0, 1)}});
      }
    }
  }
  if (fewer_doors) {
    // Spanning tree over rooms: exactly one route between any two rooms.
    std::shuffle(doors.begin(), doors.end(), rng);
    DisjointSet sets(kRooms * kRooms);
    for (const auto& d : doors) {
      if (sets.unite(d.a, d.b)) level.set_wall(d.cell, false);
    }
  } else {
    for (const auto& d : doors) level.set_wall(d.cell, false);
  }
  place(level, {1 + uniform_int(rng, 0, 1), 1 + uniform_int(rng, 0, 1)}, Direction::kRight,
        {kSize - 3 + uniform_int(rng, 0, 1), kSize - 3 + uniform_int(rng, 0, 1)});
  return level;
}

MazeLevel four_rooms(std::uint64_t seed, int size) {
  auto rng = make_rng(seed, {0x4});
  MazeLevel level(size, size);
  const int mid = size / 2;
  for (int i = 1; i < size - 1; ++i) {
    level.set_wall({mid, i}, true);
    level.set_wall({i, mid}, true);
  }
  level.set_wall({mid, uniform_int(rng, 1, mid - 1)}, false);
  level.set_wall({mid, uniform_int(rng, mid + 1, size - 2)}, false);
  level.set_wall({uniform_int(rng, 1, mid - 1), mid}, false);
  level.set_wall({uniform_int(rng, mid + 1, size - 2), mid}, false);
  const Cell agent{uniform_int(rng, 1, mid - 1), uniform_int(rng, 1, mid - 1)};
  const Cell goal{uniform_int(rng, mid + 1, size - 2), uniform_int(rng, mid + 1, size - 2)};
  place(level, agent, static_cast<Direction>(uniform_int(rng, 0, 3)), goal);
  return level;
}

MazeLevel labyrinth(int variant, int size) {
  if (size < 9) throw FieldError("size", "labyrinth needs a grid of at least 9");
  MazeLevel level(size, size);
  const int last = size - 1;
  const int center = size / 2;
  std::vector<int> offsets;
  for (int o = 2; last - o - o >= 2; o += 2) offsets.push_back(o);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const int lo = offsets[i];
    const int hi = last - lo;
    for (int k = lo; k <= hi; ++k) {
      level.set_wall({lo, k}, true);
      level.set_wall({hi, k}, true);
      level.set_wall({k, lo}, true);
      level.set_wall({k, hi}, true);
    }
    // Openings alternate between opposite sides so the route spirals inwards;
    // a radial block in the outer corridor forces one way round.
    const bool flip = (i % 2 == 1) != (variant % 2 == 1);
    if (variant % 2 == 0) {
      level.set_wall({flip ? lo : hi, center}, false);
      if (i > 0) level.set_wall({flip ? hi + 1 : lo - 1, center + 1}, true);
    } else {
      level.set_wall({center, flip ? lo : hi}, false);
      if (i > 0) level.set_wall({center + 1, flip ? hi + 1 : lo - 1}, true);
    }
  }
  place(level, {1, 1}, Direction::kRight, {center, center});
  return level;
}

MazeLevel division_maze(std::uint64_t seed, int size) {
  if (size % 2 == 0) throw FieldError("size", "division maze needs an odd grid side");
  auto rng = make_rng(seed, {0xd1});
  MazeLevel level(size, size);
  divide(level, rng, 1, size - 2, 1, size - 2);
  place(level, {1, 1}, Direction::kRight, {size - 2, size - 2});
  return level;
}

MazeLevel backtracker_maze(std::uint64_t seed, int size) {
  if (size % 2 == 0) throw FieldError("size", "backtracker maze needs an odd grid side");
  auto rng = make_rng(seed, {0xb7});
  MazeLevel level(size, size);
  fill_interior(level);
  std::vector<Cell> stack{{1, 1}};
  level.set_wall({1, 1}, false);
  while (!stack.empty()) {
    const Cell c = stack.back();
    std::vector<Direction> options;
    for (int d = 0; d < 4; ++d) {
      const Cell two = step_forward(step_forward(c, static_cast<Direction>(d)), static_cast<Direction>(d));
      if (level.is_interior(two) && level.is_wall(two)) options.push_back(static_cast<Direction>(d));
    }
    if (options.empty()) {
      stack.pop_back();
      continue;
    }
    const Direction d = options[uniform_int(rng, 0, static_cast<int>(options.size()) - 1)];
    const Cell one = step_forward(c, d);
    const Cell two = step_forward(one, d);
    level.set_wall(one, false);
    level.set_wall(two, false);
    stack.push_back(two);
  }
  place(level, {1, 1}, Direction::kRight, {size - 2, size - 2});
  return level;
}

MazeLevel comb_corridor(std::uint64_t seed, bool large, int size) {
  auto rng = make_rng(seed, {large ? 0xc2u : 0xc1u});
  MazeLevel level(size, size);
  fill_interior(level);
  const int mid = size / 2;
  for (int c = 1; c < size - 1; ++c) level.set_wall({mid, c}, false);
  const int reach = large ? mid - 1 : std::max(1, (mid - 1) / 2);
  std::vector<Cell> tips;
  for (int c = 2; c < size - 1; c += 2) {
    for (int k = 1; k <= reach; ++k) {
      level.set_wall({mid - k, c}, false);
      level.set_wall({mid + k, c}, false);
    }
    tips.push_back({mid - reach, c});
    tips.push_back({mid + reach, c});
  }
  const Cell goal = tips[uniform_int(rng, 0, static_cast<int>(tips.size()) - 1)];
  place(level, {mid, 1}, Direction::kRight, goal);
  return level;
}

MazeLevel simple_crossing(std::uint64_t seed, int lines, int size) {
  auto rng = make_rng(seed, {0x5c});
  for (int attempt = 0; attempt < 1000; ++attempt) {
    MazeLevel level(size, size);
    for (int i = 0; i < lines; ++i) {
      const int at = even_in(rng, 2, size - 3);
      const int gap = odd_in(rng, 1, size - 2);
      const bool horizontal = bernoulli(rng, 0.5);
      for (int k = 1; k < size - 1; ++k) {
        if (k == gap) continue;
        level.set_wall(horizontal ? Cell{at, k} : Cell{k, at}, true);
      }
    }
    level.set_agent({1, 1}, Direction::kRight);
    level.set_goal({size - 2, size - 2});
    if (level.is_valid() && is_solvable(level)) return level;
  }
  throw std::logic_error("simple_crossing: no solvable layout found");
}

std::vector<NamedLevel> easy_suite(std::uint64_t seed, int size, int max_walls, int count,
                                   int min_path) {
  auto rng = make_rng(seed, {0xea5});
  std::vector<NamedLevel> out;
  const auto budget = BudgetMode::uniform(0, max_walls);
  while (static_cast<int>(out.size()) < count) {
    MazeLevel level = random_level(size, size, budget, rng);
    if (shortest_path_len(level) < min_path) continue;
    out.push_back({"Easy" + std::to_string(out.size()), std::move(level)});
  }
  return out;
}

std::vector<NamedLevel> generate_suite(std::string_view kind, std::uint64_t seed) {
  std::vector<NamedLevel> out;
  if (kind == "heldout") {
    out.push_back({"Labyrinth", labyrinth(0)});
    out.push_back({"Labyrinth2", labyrinth(1)});
    out.push_back({"LargeCorridor", comb_corridor(seed, true)});
    out.push_back({"Maze", division_maze(seed)});
    out.push_back({"Maze2", division_maze(seed + 1)});
    out.push_back({"Maze3", division_maze(seed + 2)});
    out.push_back({"FourRooms", four_rooms(seed)});
    out.push_back({"SimpleCrossing", simple_crossing(seed)});
    out.push_back({"PerfectMaze", backtracker_maze(seed)});
    out.push_back({"SixteenRooms", sixteen_rooms(seed)});
    out.push_back({"SixteenRoomsFewerDoors", sixteen_rooms(seed, true)});
    out.push_back({"SmallCorridor", comb_corridor(seed, false)});
  } else if (kind == "easy") {
    out = easy_suite(seed);
  } else if (kind == "sixteen_rooms") {
    out.push_back({"SixteenRooms", sixteen_rooms(seed)});
    out.push_back({"SixteenRoomsFewerDoors", sixteen_rooms(seed, true)});
  } else if (kind == "four_rooms") {
    out.push_back({"FourRooms", four_rooms(seed)});
  } else if (kind == "labyrinth") {
    out.push_back({"Labyrinth", labyrinth(0)});
    out.push_back({"Labyrinth2", labyrinth(1)});
  } else if (kind == "maze") {
    out.push_back({"Maze", division_maze(seed)});
    out.push_back({"PerfectMaze", backtracker_maze(seed)});
  } else if (kind == "corridor") {
    out.push_back({"SmallCorridor", comb_corridor(seed, false)});
    out.push_back({"LargeCorridor", comb_corridor(seed, true)});
  } else if (kind == "simple_crossing") {
    out.push_back({"SimpleCrossing", simple_crossing(seed)});
  } else {
    throw FieldError("kind", "unknown suite kind '" + std::string(kind) + "'");
  }
  return out;
}

std::vector<std::string> suite_kinds() {
  return {"heldout", "easy", "sixteen_rooms", "four_rooms", "labyrinth", "maze", "corridor",
          "simple_crossing"};
}

}  // namespace ued::minigrid
