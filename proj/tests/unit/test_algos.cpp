#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "ued/algos/config.hpp"
#include "ued/algos/metrics_row.hpp"
#include "ued/algos/trainer.hpp"
#include "ued/core/errors.hpp"
#include "ued/minigrid/complexity.hpp"
#include "ued/minigrid/designer.hpp"
#include "ued/regret/regret.hpp"

namespace ued::algos {
namespace {

RunConfig small_config(Algorithm a, std::uint64_t seed = 1) {
  RunConfig cfg = default_config(a);
  cfg.seed = seed;
  cfg.grid_size = 7;
  cfg.budget = minigrid::BudgetMode::uniform(0, 8);
  cfg.hidden = 16;
  cfg.max_steps = 60;
  for (auto* r : {&cfg.protagonist, &cfg.antagonist, &cfg.teacher}) {
    r->workers = 2;
    r->epochs = 2;
  }
  return cfg;
}

bool same_params(const RoleState& a, const RoleState& b) {
  return a.policy.parameters() == b.policy.parameters();
}

std::string run_csv(const RunConfig& cfg, int iterations) {
  Trainer t(cfg);
  std::ostringstream out;
  t.run_until(iterations, &out);
  return out.str();
}

TEST(Config, ParsesSectionsAndOverrides) {
  const auto cfg = parse_config(
      "[run]\nalgorithm = paired_bc\nseed = 4\ngrid_size = 7\nbudget = 0-8\n"
      "[ppo]\nadam_learning_rate = 0.001\nppo_epochs = 3\n"
      "[teacher]\nentropy_coefficient = 0.05\n"
      "[bc]\nkl_loss_coefficient = 0.5\nkl_loss_interval = 4\nkl_loss_direction = unidirectional\n");
  EXPECT_EQ(cfg.algorithm, Algorithm::kPairedBc);
  EXPECT_EQ(cfg.seed, 4u);
  EXPECT_EQ(cfg.budget.kind, minigrid::BudgetMode::Kind::kUniform);
  EXPECT_EQ(cfg.budget.hi, 8);
  EXPECT_EQ(cfg.protagonist.learning_rate, 0.001);
  EXPECT_EQ(cfg.teacher.epochs, 3);
  EXPECT_EQ(cfg.teacher.entropy_coef, 0.05);
  EXPECT_EQ(cfg.protagonist.entropy_coef, 0.0);
  EXPECT_EQ(cfg.distill.kl_interval, 4);
  EXPECT_EQ(cfg.distill.direction, learn::DistillDirection::kUnidirectional);
}

TEST(Config, UnknownKeysAreNamed) {
  auto expect_field = [](const std::string& text, const std::string& field) {
    try {
      parse_config(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const FieldError& e) {
      EXPECT_EQ(e.field(), field);
    }
  };
  expect_field("[run]\nalgorithm = paired\n[ppo]\nlearnig_rate = 1\n", "ppo.learnig_rate");
  expect_field("[run]\nalgorithm = paired\n[extra]\nx = 1\n", "extra");
  expect_field("[run]\nalgorithm = paired\n[teacher]\nadam_learning_rate = -1\n",
               "teacher.adam_learning_rate");
  expect_field("[run]\nalgorithm = dr\n[buffer]\nstaleness_coefficient = 2\n",
               "buffer.staleness_coefficient");
  expect_field("[run]\nalgorithm = nope\n", "run.algorithm");
}

TEST(Config, TextRoundTrip) {
  for (Algorithm a : {Algorithm::kDomainRandomization, Algorithm::kRobustPlr, Algorithm::kPaired,
                      Algorithm::kPairedBc, Algorithm::kPairedEvo, Algorithm::kFlexPairedEvo}) {
    RunConfig cfg = small_config(a);
    cfg.teacher.learning_rate = 1.0 / 3.0;
    const std::string text = to_config_text(cfg);
    EXPECT_EQ(to_config_text(parse_config(text)), text);
  }
}

TEST(Config, AlgorithmRoleRequirements) {
  RunConfig cfg = default_config(Algorithm::kPairedBc);
  EXPECT_EQ(cfg.distill.direction, learn::DistillDirection::kBidirectional);
  EXPECT_EQ(default_config(Algorithm::kFlexPairedEvo).buffer.replay_rate, 0.9);
  cfg.distill.direction = learn::DistillDirection::kOff;
  EXPECT_THROW(cfg.validate(), FieldError);
  EXPECT_FALSE(uses_teacher(Algorithm::kRobustPlr));
  EXPECT_FALSE(uses_antagonist(Algorithm::kDomainRandomization));
  EXPECT_TRUE(uses_buffer(Algorithm::kFlexPairedEvo));
}

TEST(Paired, SymmetricStudentsGiveZeroRegret) {
  Trainer t(small_config(Algorithm::kPaired));
  t.antagonist() = t.protagonist();
  const auto stats = t.paired_iteration();
  ASSERT_FALSE(stats.scores.empty());
  for (double s : stats.scores) EXPECT_EQ(s, 0.0);
  EXPECT_TRUE(t.teacher().policy.all_finite());
}

TEST(Paired, TeacherRewardIsSparseTerminalRegret) {
  RunConfig cfg = small_config(Algorithm::kPaired);
  cfg.grid_size = 13;
  cfg.budget = minigrid::BudgetMode::fixed(25);
  Trainer t(cfg);
  const auto stats = t.paired_iteration();
  ASSERT_EQ(stats.teacher_trajectories.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& r = stats.teacher_trajectories[i].rewards;
    ASSERT_EQ(r.size(), 27u);
    for (int k = 0; k < 26; ++k) EXPECT_EQ(r[k], 0.0);
    EXPECT_EQ(r[26], stats.scores[i]);
    EXPECT_TRUE(stats.teacher_trajectories[i].done);
  }
}

TEST(DomainRandomization, OnlyProtagonistChanges) {
  Trainer t(small_config(Algorithm::kDomainRandomization));
  const RoleState a = t.antagonist(), teacher = t.teacher(), p = t.protagonist();
  t.step();
  EXPECT_TRUE(same_params(t.antagonist(), a));
  EXPECT_TRUE(same_params(t.teacher(), teacher));
  EXPECT_FALSE(same_params(t.protagonist(), p));
}

TEST(Paired, NonFiniteStateAbortsAndRollsBack) {
  Trainer t(small_config(Algorithm::kPaired));
  t.antagonist().policy.parameters().setConstant(std::numeric_limits<double>::quiet_NaN());
  const RoleState p = t.protagonist();
  EXPECT_ANY_THROW(t.paired_iteration());
  EXPECT_EQ(t.iteration(), 0);
  EXPECT_EQ(t.step_counter().value(), 0u);
  EXPECT_TRUE(same_params(t.protagonist(), p));
}

TEST(PairedBc, DirectionOffMatchesPaired) {
  const RunConfig cfg = small_config(Algorithm::kPaired);
  Trainer a(cfg), b(cfg);
  for (int i = 0; i < 3; ++i) {
    a.paired_iteration();
    b.paired_bc_iteration();
  }
  EXPECT_TRUE(same_params(a.protagonist(), b.protagonist()));
  EXPECT_TRUE(same_params(a.antagonist(), b.antagonist()));
  EXPECT_TRUE(same_params(a.teacher(), b.teacher()));
}

TEST(PairedBc, UnidirectionalAntagonistIgnoresProtagonist) {
  RunConfig cfg = small_config(Algorithm::kPairedBc);
  cfg.distill.direction = learn::DistillDirection::kUnidirectional;
  Trainer a(cfg), b(cfg);
  Rng noise = make_rng(5);
  for (Eigen::Index i = 0; i < b.protagonist().policy.parameters().size(); ++i) {
    b.protagonist().policy.parameters()[i] += 0.1 * standard_normal(noise);
  }
  a.paired_bc_iteration();
  b.paired_bc_iteration();
  EXPECT_TRUE(same_params(a.antagonist(), b.antagonist()));
  EXPECT_FALSE(same_params(a.protagonist(), b.protagonist()));

  cfg.distill.direction = learn::DistillDirection::kBidirectional;
  cfg.distill.kl_interval = 1;
  Trainer c(cfg), d(cfg);
  d.protagonist().policy.parameters() = b.protagonist().policy.parameters();
  c.paired_bc_iteration();
  d.paired_bc_iteration();
  EXPECT_FALSE(same_params(c.antagonist(), d.antagonist()));
}

TEST(PairedEvo, ZeroReplayRateNeverTrains) {
  for (Algorithm alg : {Algorithm::kPairedEvo, Algorithm::kFlexPairedEvo}) {
    RunConfig cfg = small_config(alg);
    cfg.buffer.replay_rate = 0.0;
    Trainer t(cfg);
    const RoleState p = t.protagonist(), a = t.antagonist();
    for (int i = 0; i < 5; ++i) EXPECT_FALSE(t.step().replayed);
    EXPECT_TRUE(same_params(t.protagonist(), p));
    EXPECT_TRUE(same_params(t.antagonist(), a));
    EXPECT_GT(t.buffer().size(), 0u);
  }
}

TEST(PairedEvo, InsertedScoresMatchRecordedReturns) {
  for (Algorithm alg : {Algorithm::kPairedEvo, Algorithm::kFlexPairedEvo}) {
    RunConfig cfg = small_config(alg);
    cfg.buffer.replay_rate = 0.5;
    cfg.eval_episodes = 2;
    Trainer t(cfg);
    int inserted = 0;
    bool saw_replay = false;
    for (int i = 0; i < 8; ++i) {
      const auto stats = t.step();
      saw_replay = saw_replay || stats.replayed;
      std::map<std::uint64_t, double> latest;  // a level scored twice keeps the later score
      for (const auto& s : stats.scored) {
        const double expected = alg == Algorithm::kPairedEvo
                                    ? regret::relative_regret(s.return_a, s.return_p)
                                    : regret::flexible_regret(s.return_a, s.return_p).score;
        EXPECT_EQ(s.score, expected);
        if (s.outcome != plr::InsertOutcome::kRejected) {
          latest[s.level_hash] = s.score;
          ++inserted;
        }
      }
      for (const auto& [hash, score] : latest) {
        const std::size_t k = t.buffer().find(hash);
        ASSERT_LT(k, t.buffer().size());
        EXPECT_EQ(t.buffer().entries()[k].score, score);
      }
    }
    EXPECT_TRUE(saw_replay);
    EXPECT_GT(inserted, 0);
  }
}

TEST(PairedEvo, ReplayBranchTrainsAndEditsLevels) {
  RunConfig cfg = small_config(Algorithm::kPairedEvo);
  cfg.buffer.replay_rate = 1.0;
  Trainer t(cfg);
  const auto first = t.step();  // empty buffer forces fresh levels
  EXPECT_FALSE(first.replayed);
  const RoleState p = t.protagonist();
  const auto second = t.step();
  EXPECT_TRUE(second.replayed);
  EXPECT_TRUE(second.protagonist_updated);
  EXPECT_FALSE(same_params(t.protagonist(), p));
  // Replayed levels are re-scored first, then their edits.
  ASSERT_EQ(second.scored.size(), 2 * second.levels.size());
  for (std::size_t i = 0; i < second.levels.size(); ++i) {
    EXPECT_EQ(second.scored[i].level_hash, second.levels[i].hash());
    EXPECT_EQ(second.scored[i].outcome, plr::InsertOutcome::kUpdated);
  }
}

TEST(RobustPlr, ZeroReplayRateNeverTrains) {
  RunConfig cfg = small_config(Algorithm::kRobustPlr);
  cfg.buffer.replay_rate = 0.0;
  Trainer t(cfg);
  const RoleState p = t.protagonist();
  for (int i = 0; i < 4; ++i) t.step();
  EXPECT_TRUE(same_params(t.protagonist(), p));
}

TEST(RobustPlr, ScoresAreNonNegative) {
  RunConfig cfg = small_config(Algorithm::kRobustPlr);
  cfg.buffer.replay_rate = 0.5;
  Trainer t(cfg);
  for (int i = 0; i < 8; ++i) {
    for (double s : t.step().scores) EXPECT_GE(s, 0.0);
  }
  for (const auto& e : t.buffer().entries()) EXPECT_GE(e.score, 0.0);
}

TEST(RobustPlr, PerfectValueFunctionScoresZero) {
  // gamma = 0.5, reward 1 at the third step: values are the exact returns-to-go.
  Trajectory traj;
  traj.rewards = {0.0, 0.0, 1.0};
  traj.values = {0.25, 0.5, 1.0, 0.0};
  traj.actions = {2, 2, 2};
  traj.done = true;
  EXPECT_EQ(regret::positive_value_loss(traj, 0.5, 0.95), 0.0);

  plr::LevelBuffer buf({2, 0.3, 0.5, 0.5});
  Rng rng = make_rng(1);
  buf.maybe_insert(minigrid::random_level(7, 7, minigrid::BudgetMode::fixed(3), rng), 0.1, 0);
  buf.maybe_insert(minigrid::random_level(7, 7, minigrid::BudgetMode::fixed(4), rng), 0.2, 0);
  EXPECT_EQ(buf.maybe_insert(minigrid::random_level(7, 7, minigrid::BudgetMode::fixed(5), rng),
                             regret::positive_value_loss(traj, 0.5, 0.95), 1),
            plr::InsertOutcome::kRejected);
}

TEST(DomainRandomization, BlockCountsMatchUniformDesigner) {
  // Reference: drive the designer with uniformly random placements.
  const int n = 10000;
  const auto mode = minigrid::BudgetMode::uniform(0, 8);
  std::map<int, double> lib, ref;
  Rng a = make_rng(40), b = make_rng(41);
  for (int i = 0; i < n; ++i) {
    lib[minigrid::block_count(minigrid::random_level(7, 7, mode, a))] += 1;
    auto s = minigrid::DesignerState::start(7, 7, minigrid::sample_budget(mode, b));
    while (!s.finished()) s = minigrid::designer_step(s, uniform_int(b, 0, s.action_count() - 1));
    ref[minigrid::block_count(s.to_level())] += 1;
  }
  // Two-sample chi-square over block counts 0..8.
  double chi2 = 0.0;
  int bins = 0;
  for (int k = 0; k <= 8; ++k) {
    const double x = lib[k], y = ref[k];
    if (x + y == 0) continue;
    chi2 += (x - y) * (x - y) / (x + y);
    ++bins;
  }
  EXPECT_GE(bins, 8);
  EXPECT_LT(chi2, 26.12);  // 0.999 quantile at 8 degrees of freedom
}

TEST(DomainRandomization, IterationTrainsOnNonEmptyBatch) {
  Trainer t(small_config(Algorithm::kDomainRandomization));
  const RoleState p = t.protagonist();
  const auto stats = t.step();
  EXPECT_TRUE(stats.protagonist_updated);
  EXPECT_GT(stats.env_steps, 0u);
  EXPECT_FALSE(same_params(t.protagonist(), p));
}

TEST(Trainer, StepAccountingMatchesCounter) {
  for (Algorithm alg : {Algorithm::kDomainRandomization, Algorithm::kRobustPlr, Algorithm::kPaired,
                        Algorithm::kPairedEvo}) {
    RunConfig cfg = small_config(alg);
    cfg.eval_episodes = 2;
    Trainer t(cfg);
    std::uint64_t sum = 0;
    for (int i = 0; i < 4; ++i) {
      const auto stats = t.step();
      sum += stats.env_steps;
      EXPECT_EQ(stats.returns_p.size() % 2, 0u);  // E episodes per level
    }
    EXPECT_EQ(t.env_steps(), sum);
    EXPECT_EQ(t.step_counter().value(), sum);
  }
}

TEST(Trainer, IdenticalSeedsGiveIdenticalMetrics) {
  for (Algorithm alg : {Algorithm::kDomainRandomization, Algorithm::kRobustPlr, Algorithm::kPaired,
                        Algorithm::kPairedBc, Algorithm::kPairedEvo, Algorithm::kFlexPairedEvo}) {
    const RunConfig cfg = small_config(alg, 3);
    const std::string a = run_csv(cfg, 3);
    EXPECT_EQ(a, run_csv(cfg, 3)) << to_string(alg);
    EXPECT_NE(a, run_csv(small_config(alg, 4), 3)) << to_string(alg);
  }
}

TEST(Trainer, CheckpointResumeIsBitIdentical) {
  for (Algorithm alg : {Algorithm::kDomainRandomization, Algorithm::kRobustPlr, Algorithm::kPaired,
                        Algorithm::kPairedBc, Algorithm::kPairedEvo, Algorithm::kFlexPairedEvo}) {
    RunConfig cfg = small_config(alg, 6);
    cfg.eval_suite = "easy";
    cfg.eval_suite_episodes = 1;
    Trainer full(cfg);
    std::ostringstream a;
    full.run_until(5, &a);

    Trainer first(cfg);
    std::ostringstream b;
    first.run_until(2, &b);
    Trainer resumed = Trainer::from_checkpoint(nlohmann::json::parse(first.checkpoint().dump()));
    resumed.run_until(5, &b);
    EXPECT_EQ(a.str(), b.str()) << to_string(alg);
    EXPECT_EQ(full.checkpoint().dump(), resumed.checkpoint().dump()) << to_string(alg);
  }
}

TEST(Trainer, MetricsRowsAreFiniteAndStepsIncrease) {
  RunConfig cfg = small_config(Algorithm::kPaired);
  cfg.eval_suite = "easy";
  cfg.eval_suite_episodes = 1;
  std::istringstream in(metrics_header() + "\n" + run_csv(cfg, 4));
  const auto rows = read_metrics(in);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].all_finite());
    EXPECT_EQ(rows[i].iteration, static_cast<std::int64_t>(i + 1));
    if (i > 0) EXPECT_GT(rows[i].env_steps, rows[i - 1].env_steps);
    EXPECT_EQ(rows[i].wallclock_s, 0.0);
  }
}

}  // namespace
}  // namespace ued::algos
