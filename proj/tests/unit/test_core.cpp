#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ued/core/categorical.hpp"
#include "ued/core/errors.hpp"
#include "ued/core/level_params.hpp"
#include "ued/core/rng.hpp"
#include "ued/core/rollout.hpp"
#include "ued/core/trajectory.hpp"
#include "ued/minigrid/designer.hpp"
#include "ued/minigrid/maze_level.hpp"
#include "ued/minigrid/student_env.hpp"
#include "ued/oracle/oracle.hpp"

namespace ued {
namespace {

using minigrid::Cell;
using minigrid::Direction;
using minigrid::MazeLevel;

class UniformPolicy : public Policy {
 public:
  PolicyOutput evaluate(std::span<const double>) const override { return {{0.0, 0.0, 0.0}, 0.25}; }
};

// Fixed action sequence, independent of the observation.
class ScriptedPolicy : public Policy {
 public:
  PolicyOutput evaluate(std::span<const double>) const override {
    return {{-1e9, -1e9, 0.0}, 0.0};  // always forward
  }
};

TEST(Rng, StreamsWithDifferentTagsDiffer) {
  Rng a = make_rng(7, {1});
  Rng b = make_rng(7, {2});
  Rng c = make_rng(7, {1});
  EXPECT_NE(a(), b());
  a = make_rng(7, {1});
  EXPECT_EQ(a(), c());
}

TEST(Rng, StateRoundTrip) {
  Rng a = make_rng(3);
  for (int i = 0; i < 10; ++i) a();
  Rng b = rng_from_state(rng_state(a));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, UniformIntIsInclusive) {
  Rng r = make_rng(1);
  std::set<int> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(uniform_int(r, 2, 4));
  EXPECT_EQ(seen, (std::set<int>{2, 3, 4}));
}

TEST(LevelParams, HashStableForEqualCanonicalForm) {
  LevelParams a{"env", {1, 2, 3}};
  LevelParams b{"env", {1, 2, 3}};
  EXPECT_EQ(a.canonical(), b.canonical());
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), (LevelParams{"env", {1, 2, 4}}).hash());
  EXPECT_NE(a.hash(), (LevelParams{"env2", {1, 2, 3}}).hash());
}

TEST(LevelParams, NoCollisionsOverRandomLevels) {
  Rng rng = make_rng(11);
  std::set<std::string> canon;
  std::set<std::uint64_t> hashes;
  const auto mode = minigrid::BudgetMode::uniform(0, 60);
  for (int i = 0; i < 100000; ++i) {
    const auto p = minigrid::random_level(13, 13, mode, rng).to_params();
    if (canon.insert(p.canonical()).second) hashes.insert(p.hash());
  }
  EXPECT_EQ(hashes.size(), canon.size());
}

TEST(Categorical, SoftmaxSumsToOne) {
  const std::vector<double> logits{1000.0, -3.0, 2.5};
  const auto p = softmax(logits);
  EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
  const auto lp = log_softmax(logits);
  EXPECT_TRUE(std::isfinite(lp[1]));
}

TEST(Trajectory, BatchBoundariesPartitionExactly) {
  Trajectory a;
  a.observations = {{1.0}, {2.0}};
  a.actions = {0, 1};
  a.log_probs = {-1.0, -1.0};
  a.rewards = {0.0, 1.0};
  a.values = {0.0, 0.0, 0.0};
  a.done = true;
  Trajectory b = a;
  b.observations.pop_back();
  b.actions.pop_back();
  b.log_probs.pop_back();
  b.rewards.pop_back();
  b.values.pop_back();
  ASSERT_TRUE(a.well_formed());
  ASSERT_TRUE(b.well_formed());
  const std::vector<Trajectory> trajs{a, b};
  const auto batch = flatten(trajs);
  EXPECT_EQ(batch.size(), 3u);
  EXPECT_EQ(batch.trajectory_count(), 2u);
  EXPECT_TRUE(batch.partitions_exactly());
  EXPECT_EQ(batch.observation(2)[0], 1.0);
}

TEST(Instantiate, UnknownEnvironmentRejected) {
  try {
    instantiate(LevelParams{"nope", {}}, 0);
    FAIL();
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "env_id");
  }
}

TEST(Instantiate, GoalOnAgentRejectedWithField) {
  MazeLevel level(13, 13);
  level.set_goal(level.agent_pos());
  try {
    instantiate(level.to_params(), 0);
    FAIL();
  } catch (const FieldError& e) {
    EXPECT_EQ(e.field(), "goal");
  }
}

TEST(Instantiate, FirstObservationIsWindowAtStart) {
  const MazeLevel level(13, 13);
  auto env = instantiate(level.to_params(), 0);
  const auto obs = env->reset();
  EXPECT_EQ(obs, minigrid::encode_observation(level, level.agent_pos(), level.agent_dir()));
}

TEST(Instantiate, DeterministicUnderSameActions) {
  Rng rng = make_rng(5);
  const auto level = minigrid::random_level(13, 13, minigrid::BudgetMode::fixed(30), rng);
  auto e1 = instantiate(level.to_params(), 9);
  auto e2 = instantiate(level.to_params(), 9);
  EXPECT_EQ(e1->reset(), e2->reset());
  for (int t = 0; t < 100; ++t) {
    const int a = uniform_int(rng, 0, 2);
    const auto s1 = e1->step(a);
    const auto s2 = e2->step(a);
    ASSERT_EQ(s1.observation, s2.observation);
    ASSERT_EQ(s1.reward, s2.reward);
    if (s1.terminated || s1.truncated) break;
  }
}

TEST(Rollout, UnsolvableMazeRunsToTheLimit) {
  MazeLevel level(5, 5);
  level.set_agent({1, 1}, Direction::kRight);
  level.set_goal({3, 3});
  level.set_wall({2, 3}, true);
  level.set_wall({3, 2}, true);
  minigrid::MazeEnv env(level);
  Rng rng = make_rng(1);
  const auto traj = rollout(UniformPolicy{}, env, 250, rng);
  EXPECT_EQ(traj.length(), 250u);
  EXPECT_EQ(undiscounted_return(traj), 0.0);
  EXPECT_FALSE(traj.done);
  EXPECT_EQ(traj.values.back(), 0.25);  // bootstrapped, not terminal
}

TEST(Rollout, StraightCorridorReward) {
  MazeLevel level(13, 13);
  level.set_agent({1, 1}, Direction::kRight);
  level.set_goal({1, 6});
  minigrid::MazeEnv env(level);
  Rng rng = make_rng(1);
  const auto traj = rollout(ScriptedPolicy{}, env, 250, rng);
  EXPECT_EQ(traj.length(), 5u);
  EXPECT_TRUE(traj.done);
  EXPECT_DOUBLE_EQ(undiscounted_return(traj), 1.0 - 5.0 / 250.0);
  EXPECT_EQ(traj.values.back(), 0.0);
}

TEST(Rollout, MaxStepsOneGivesOneStep) {
  minigrid::MazeEnv env(MazeLevel(13, 13));
  Rng rng = make_rng(1);
  const auto traj = rollout(UniformPolicy{}, env, 1, rng);
  EXPECT_EQ(traj.length(), 1u);
  EXPECT_TRUE(traj.well_formed());
  EXPECT_THROW(rollout(UniformPolicy{}, env, 0, rng), std::invalid_argument);
}

TEST(Rollout, LogProbsMatchReevaluation) {
  class Skewed : public Policy {
   public:
    PolicyOutput evaluate(std::span<const double> obs) const override {
      return {{obs[0] * 0.3, 0.1, -0.2 + obs[5]}, 0.0};
    }
  };
  Rng rng = make_rng(2);
  const auto level = minigrid::random_level(13, 13, minigrid::BudgetMode::fixed(20), rng);
  minigrid::MazeEnv env(level);
  Skewed policy;
  const auto traj = rollout(policy, env, 250, rng);
  for (std::size_t t = 0; t < traj.length(); ++t) {
    const auto lp = log_softmax(policy.evaluate(traj.observations[t]).logits);
    ASSERT_NEAR(lp[traj.actions[t]], traj.log_probs[t], 1e-12);
  }
}

TEST(Rollout, CounterTracksSteps) {
  StepCounter counter;
  Rng rng = make_rng(3);
  std::size_t total = 0;
  for (int i = 0; i < 5; ++i) {
    minigrid::MazeEnv env(MazeLevel(7, 7));
    total += rollout(UniformPolicy{}, env, 250, rng, &counter).length();
  }
  EXPECT_EQ(counter.value(), total);
}

TEST(Rollout, DeterministicPolicyReturnEqualsExactValue) {
  Rng rng = make_rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto level = minigrid::random_level(9, 9, minigrid::BudgetMode::fixed(10), rng);
    minigrid::MazeEnv env(level);
    oracle::OracleGuidedPolicy policy(env);
    const auto traj = rollout(policy, env, 250, rng);
    const double exact = oracle::exact_policy_value(level, oracle::optimal_state_policy(level));
    EXPECT_NEAR(undiscounted_return(traj), exact, 1e-12);
  }
}

TEST(UndiscountedReturn, Examples) {
  Trajectory t;
  EXPECT_EQ(undiscounted_return(t), 0.0);
  t.rewards = {0, 0, 0.9};
  EXPECT_DOUBLE_EQ(undiscounted_return(t), 0.9);
  t.rewards = {0.5, -1.0, 0.25};
  EXPECT_DOUBLE_EQ(undiscounted_return(t), -0.25);
}

}  // namespace
}  // namespace ued
