#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ued/core/errors.hpp"
#include "ued/core/rng.hpp"
#include "ued/minigrid/complexity.hpp"
#include "ued/minigrid/designer.hpp"
#include "ued/minigrid/level_io.hpp"
#include "ued/minigrid/maze_level.hpp"
#include "ued/minigrid/student_env.hpp"
#include "ued/minigrid/suites.hpp"

namespace ued::minigrid {
namespace {

constexpr int kLeft = 0, kRight = 1, kForward = 2;

CellCategory category_at(const std::vector<double>& obs, int forward, int lateral) {
  const int slot = forward * kViewSize + lateral + 3;
  for (int k = 0; k < kCellCategories; ++k) {
    if (obs[slot * kCellCategories + k] == 1.0) return static_cast<CellCategory>(k);
  }
  ADD_FAILURE() << "no category set";
  return CellCategory::kEmpty;
}

TEST(MazeLevel, DefaultLayout) {
  const MazeLevel level(13, 13);
  EXPECT_EQ(level.agent_pos(), (Cell{1, 1}));
  EXPECT_EQ(level.goal_pos(), (Cell{11, 11}));
  EXPECT_TRUE(level.is_wall({0, 5}));
  EXPECT_TRUE(level.is_wall({-1, 5}));
  EXPECT_FALSE(level.is_wall({5, 5}));
  EXPECT_EQ(level.interior_cell_count(), 121);
  EXPECT_NO_THROW(level.validate());
}

TEST(MazeLevel, BorderWallsCannotBeCleared) {
  MazeLevel level(7, 7);
  level.set_wall({0, 3}, false);
  EXPECT_TRUE(level.is_wall({0, 3}));
}

TEST(MazeLevel, ValidatorNamesTheField) {
  MazeLevel level(7, 7);
  level.set_wall(level.goal_pos(), true);
  try {
    level.validate();
    FAIL();
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "goal");
  }
  MazeLevel l2(7, 7);
  l2.set_agent({0, 3}, Direction::kUp);
  EXPECT_FALSE(l2.is_valid());
}

TEST(MazeLevel, ParamsRoundTripAndRejectMalformedTheta) {
  Rng rng = make_rng(1);
  const auto level = random_level(13, 13, BudgetMode::fixed(40), rng);
  EXPECT_EQ(MazeLevel::from_params(level.to_params()), level);
  auto p = level.to_params();
  p.theta.pop_back();
  try {
    MazeLevel::from_params(p);
    FAIL();
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "walls");
  }
  p = level.to_params();
  p.theta[4] = 7;
  try {
    MazeLevel::from_params(p);
    FAIL();
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "agent_dir");
  }
}

TEST(StudentEnv, ForwardIntoWallIsNoOp) {
  MazeLevel level(7, 7);
  level.set_agent({1, 1}, Direction::kUp);
  MazeEnv env(level);
  const auto r = env.step(kForward);
  EXPECT_EQ(env.state().pos, (Cell{1, 1}));
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_FALSE(r.terminated);
}

TEST(StudentEnv, TurnsFollowHeadingOrder) {
  MazeEnv env(MazeLevel(7, 7));
  env.step(kRight);
  EXPECT_EQ(env.state().dir, Direction::kDown);
  env.step(kLeft);
  env.step(kLeft);
  EXPECT_EQ(env.state().dir, Direction::kUp);
}

TEST(StudentEnv, GoalOnFiftiethStepPaysPointEight) {
  MazeLevel level(13, 13);
  level.set_agent({1, 1}, Direction::kRight);
  level.set_goal({1, 2});
  MazeEnv env(level);
  env.step(kLeft);  // face the top wall
  for (int i = 0; i < 47; ++i) ASSERT_FALSE(env.step(kForward).terminated);
  env.step(kRight);
  ASSERT_EQ(env.elapsed_steps(), 49);
  const auto r = env.step(kForward);
  EXPECT_TRUE(r.terminated);
  EXPECT_DOUBLE_EQ(r.reward, 1.0 - 50.0 / 250.0);
  EXPECT_THROW(env.step(kForward), std::logic_error);
}

TEST(StudentEnv, TruncatesAtLimitWithZeroReward) {
  MazeEnv env(MazeLevel(13, 13));
  double total = 0.0;
  StepResult r;
  for (int i = 0; i < 250; ++i) {
    r = env.step(kLeft);
    total += r.reward;
  }
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(r.terminated);
  EXPECT_EQ(total, 0.0);
}

TEST(StudentEnv, RejectsUnknownAction) {
  MazeEnv env(MazeLevel(7, 7));
  try {
    env.step(3);
    FAIL();
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "action");
  }
}

TEST(Observation, WindowFacingRightFromCorner) {
  const MazeLevel level(13, 13);
  const auto obs = encode_observation(level, {1, 1}, Direction::kRight);
  ASSERT_EQ(obs.size(), static_cast<std::size_t>(7 * 7 * 4 + 4));
  EXPECT_EQ(category_at(obs, 0, 0), CellCategory::kEmpty);
  EXPECT_EQ(category_at(obs, 0, -1), CellCategory::kWall);          // (0, 1)
  EXPECT_EQ(category_at(obs, 0, -2), CellCategory::kOutOfBounds);   // (-1, 1)
  EXPECT_EQ(category_at(obs, 3, 1), CellCategory::kEmpty);          // (2, 4)
  EXPECT_EQ(obs[7 * 7 * 4 + 0], 1.0);
  double total = 0.0;
  for (double x : obs) total += x;
  EXPECT_EQ(total, 50.0);
}

TEST(Observation, WindowFacingUpSeesGoalAndWalls) {
  MazeLevel level(13, 13);
  level.set_goal({3, 6});
  level.set_wall({4, 4}, true);
  const auto obs = encode_observation(level, {5, 5}, Direction::kUp);
  EXPECT_EQ(category_at(obs, 2, 1), CellCategory::kGoal);  // forward 2 rows, one right
  EXPECT_EQ(category_at(obs, 1, -1), CellCategory::kWall);
  EXPECT_EQ(category_at(obs, 5, 0), CellCategory::kWall);   // row 0 border
  EXPECT_EQ(category_at(obs, 6, 0), CellCategory::kOutOfBounds);
  EXPECT_EQ(obs[7 * 7 * 4 + 3], 1.0);
}

TEST(Observation, WallsDoNotOcclude) {
  MazeLevel level(13, 13);
  level.set_wall({1, 3}, true);
  level.set_goal({1, 5});
  const auto obs = encode_observation(level, {1, 1}, Direction::kRight);
  EXPECT_EQ(category_at(obs, 2, 0), CellCategory::kWall);
  EXPECT_EQ(category_at(obs, 4, 0), CellCategory::kGoal);
}

TEST(Designer, EpisodeLengthIsBudgetPlusTwo) {
  DesignerEnv env(13, 13, 25, 25, std::vector<double>(kNoiseSize, 0.0));
  env.reset();
  int steps = 0;
  StepResult r;
  do {
    r = env.step(14 + steps);
    EXPECT_EQ(r.reward, 0.0);
    ++steps;
  } while (!r.terminated);
  EXPECT_EQ(steps, 27);
  EXPECT_NO_THROW(env.level().validate());
}

TEST(Designer, PlacementRules) {
  auto s = DesignerState::start(7, 7, 3);
  s = designer_step(s, 0);           // border: no-op
  s = designer_step(s, 1 * 7 + 2);   // wall at (1,2)
  s = designer_step(s, 1 * 7 + 2);   // duplicate: no-op
  EXPECT_EQ(s.t, 3);
  s = designer_step(s, 1 * 7 + 2);   // goal on the wall clears it
  EXPECT_EQ(*s.goal, (Cell{1, 2}));
  s = designer_step(s, 1 * 7 + 2);   // agent on the goal moves to first free cell
  EXPECT_TRUE(s.finished());
  const auto level = s.to_level();
  EXPECT_EQ(level.agent_pos(), (Cell{1, 1}));
  EXPECT_EQ(level.agent_dir(), Direction::kRight);
  EXPECT_EQ(block_count(level), 0);
}

TEST(Designer, BorderGoalIsClampedInside) {
  auto s = DesignerState::start(7, 7, 0);
  s = designer_step(s, 0);  // goal target (0,0)
  EXPECT_EQ(*s.goal, (Cell{1, 1}));
}

TEST(Designer, ObservationSlotMarksPhase) {
  const std::vector<double> noise(kNoiseSize, 0.5);
  auto s = DesignerState::start(5, 5, 2);
  const int grid = 4 * 25;
  const int max_budget = 4;
  auto slot = [&](const DesignerState& st) {
    const auto obs = encode_designer_observation(st, max_budget, noise);
    EXPECT_EQ(obs.size(), static_cast<std::size_t>(designer_observation_size(5, 5, max_budget)));
    for (int k = 0; k < max_budget + 2; ++k) {
      if (obs[grid + k] == 1.0) return k;
    }
    return -1;
  };
  EXPECT_EQ(slot(s), 0);
  s = designer_step(s, 6);
  EXPECT_EQ(slot(s), 1);
  s = designer_step(s, 7);
  EXPECT_EQ(slot(s), 4);  // goal step
  s = designer_step(s, 12);
  EXPECT_EQ(slot(s), 5);  // agent step
}

TEST(Designer, RandomLevelsAlwaysValid) {
  Rng rng = make_rng(3);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_TRUE(random_level(13, 13, BudgetMode::uniform(0, 60), rng).is_valid());
  }
}

TEST(Complexity, BfsAndFloodFillAgree) {
  Rng rng = make_rng(4);
  for (int i = 0; i < 2000; ++i) {
    const auto level = random_level(9, 9, BudgetMode::uniform(0, 40), rng);
    ASSERT_EQ(shortest_path_len(level) > 0, is_solvable(level));
  }
}

TEST(Complexity, HandExamples) {
  MazeLevel level(7, 7);
  level.set_agent({1, 1}, Direction::kRight);
  level.set_goal({1, 5});
  EXPECT_EQ(shortest_path_len(level), 4);
  level.set_wall({1, 3}, true);
  EXPECT_EQ(shortest_path_len(level), 6);
  EXPECT_EQ(block_count(level), 1);
  for (int r = 1; r <= 5; ++r) level.set_wall({r, 3}, true);
  EXPECT_EQ(shortest_path_len(level), 0);
  EXPECT_FALSE(is_solvable(level));
  EXPECT_EQ(block_count(level), 5);
}

TEST(LevelIo, RoundTripIsByteStable) {
  Rng rng = make_rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto level = random_level(13, 13, BudgetMode::uniform(0, 60), rng);
    const auto text = to_level_text(level);
    const auto back = parse_level_text(text);
    EXPECT_EQ(back, level);
    EXPECT_EQ(to_level_text(back), text);
  }
}

TEST(LevelIo, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "ued_level_io";
  std::filesystem::create_directories(dir);
  Rng rng = make_rng(6);
  std::vector<MazeLevel> levels;
  for (int i = 0; i < 5; ++i) levels.push_back(random_level(9, 9, BudgetMode::fixed(10), rng));
  save_level(dir / "one.json", levels[0]);
  EXPECT_EQ(load_level(dir / "one.json"), levels[0]);
  save_levels(dir / "many.jsonl", levels);
  EXPECT_EQ(load_levels(dir / "many.jsonl"), levels);
  std::ifstream a(dir / "one.json", std::ios::binary);
  std::stringstream first;
  first << a.rdbuf();
  save_level(dir / "two.json", load_level(dir / "one.json"));
  std::ifstream b(dir / "two.json", std::ios::binary);
  std::stringstream second;
  second << b.rdbuf();
  EXPECT_EQ(first.str(), second.str());
}

TEST(LevelIo, RejectsUnknownAndMissingKeys) {
  try {
    parse_level_text(R"({"version":1,"width":7,"height":7,"walls":[],"agent":[1,1,0],"goal":[5,5],"x":1})");
    FAIL();
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "x");
  }
  try {
    parse_level_text(R"({"version":1,"width":7,"height":7,"walls":[],"agent":[1,1,0]})");
    FAIL();
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "goal");
  }
  EXPECT_THROW(parse_level_text("not json"), FieldError);
}

TEST(LevelIo, AsciiRender) {
  MazeLevel level(5, 5);
  level.set_wall({2, 2}, true);
  level.set_agent({1, 1}, Direction::kDown);
  level.set_goal({3, 3});
  EXPECT_EQ(render_ascii(level), "#####\n#v..#\n#.#.#\n#..G#\n#####\n");
}

TEST(Suites, HeldoutAnaloguesAreValidSolvableAndDeterministic) {
  const auto a = generate_suite("heldout", 0);
  const auto b = generate_suite("heldout", 0);
  ASSERT_EQ(a.size(), 12u);
  std::set<std::string> names;
  for (std::size_t i = 0; i < a.size(); ++i) {
    names.insert(a[i].name);
    EXPECT_EQ(a[i].level, b[i].level);
    EXPECT_EQ(a[i].level.width(), 13);
    EXPECT_TRUE(a[i].level.is_valid()) << a[i].name;
    EXPECT_TRUE(is_solvable(a[i].level)) << a[i].name;
  }
  EXPECT_EQ(names.size(), 12u);
}

TEST(Suites, OtherSeedsAlsoSolvable) {
  for (std::uint64_t seed = 1; seed < 20; ++seed) {
    for (const auto& l : generate_suite("heldout", seed)) {
      ASSERT_TRUE(is_solvable(l.level)) << l.name << " seed " << seed;
    }
  }
}

TEST(Suites, EasySuiteShape) {
  const auto easy = easy_suite(0);
  ASSERT_EQ(easy.size(), 20u);
  for (const auto& l : easy) {
    EXPECT_EQ(l.level.width(), 7);
    EXPECT_LE(block_count(l.level), 8);
    EXPECT_GE(shortest_path_len(l.level), 4);
  }
}

TEST(Suites, UnknownKindRejected) {
  try {
    generate_suite("mountains", 0);
    FAIL();
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "kind");
  }
}

}  // namespace
}  // namespace ued::minigrid
