#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ued/algos/config.hpp"
#include "ued/algos/metrics_row.hpp"
#include "ued/core/rollout.hpp"
#include "ued/eval/metrics.hpp"
#include "ued/learn/mlp.hpp"
#include "ued/learn/ppo.hpp"
#include "ued/plr/level_buffer.hpp"

namespace ued::algos {

using minigrid::MazeLevel;

// One learner: parameters, optimiser, reward scaler and its private RNG stream.
struct RoleState {
  learn::MlpPolicy policy;
  learn::AdamState adam;
  learn::ReturnNormalizer normalizer;
  Rng rng;
};

// Evaluation of one level by the two students, as recorded for the buffer.
struct ScoredLevel {
  std::uint64_t level_hash = 0;
  double return_p = 0.0;
  double return_a = 0.0;
  double score = 0.0;
  plr::InsertOutcome outcome = plr::InsertOutcome::kRejected;
};

struct IterationStats {
  bool replayed = false;
  std::vector<MazeLevel> levels;  // generated or replayed this iteration
  std::vector<double> returns_p;  // every protagonist episode
  std::vector<double> returns_a;
  std::vector<double> scores;     // regret or level scores computed this iteration
  std::vector<ScoredLevel> scored;
  std::vector<Trajectory> teacher_trajectories;
  double teacher_entropy = 0.0;
  double student_entropy = 0.0;
  std::uint64_t env_steps = 0;
  bool protagonist_updated = false;
  bool antagonist_updated = false;
  bool teacher_updated = false;
};

class Trainer {
 public:
  explicit Trainer(RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  std::int64_t iteration() const { return iteration_; }
  std::uint64_t env_steps() const { return env_steps_; }
  const StepCounter& step_counter() const { return counter_; }

  RoleState& protagonist() { return protagonist_; }
  RoleState& antagonist() { return antagonist_; }
  RoleState& teacher() { return teacher_; }
  const RoleState& protagonist() const { return protagonist_; }
  const RoleState& antagonist() const { return antagonist_; }
  const RoleState& teacher() const { return teacher_; }
  plr::LevelBuffer& buffer() { return buffer_; }
  const plr::LevelBuffer& buffer() const { return buffer_; }

  // One iteration of the configured algorithm.
  IterationStats step();

  IterationStats paired_iteration();
  IterationStats paired_bc_iteration();
  // Scores with flexible regret when the algorithm is flexpaired_evo.
  IterationStats paired_evo_iteration();
  IterationStats plr_robust_iteration();
  IterationStats domain_randomization_iteration();

  // Metrics for the iteration just completed; runs the evaluation suite if set.
  MetricsRow metrics(const IterationStats& stats);

  // Runs until `iteration() == target`, writing one row per logging step.
  void run_until(std::int64_t target, std::ostream* csv);

  nlohmann::json checkpoint() const;
  static Trainer from_checkpoint(const nlohmann::json& j);
  void save_checkpoint(const std::filesystem::path& path) const;
  static Trainer load_checkpoint(const std::filesystem::path& path);

 private:
  struct Collected {
    std::vector<Trajectory> trajectories;
    std::vector<double> level_returns;  // mean return per level
  };

  // E episodes per level with the role's RNG, counted as student steps.
  Collected collect(RoleState& role, std::span<const MazeLevel> levels);
  void update(RoleState& role, const learn::PpoConfig& ppo, std::span<const Trajectory> trajs,
              const learn::MlpPolicy* distill_target);
  IterationStats paired_like(bool with_distill);
  MazeLevel random_level();
  void finish(IterationStats& stats, std::uint64_t steps_before);

  RunConfig cfg_;
  RoleState protagonist_;
  RoleState antagonist_;
  RoleState teacher_;
  plr::LevelBuffer buffer_;
  Rng level_rng_;
  Rng buffer_rng_;
  Rng eval_rng_;
  std::optional<eval::EvalSuite> suite_;
  std::int64_t iteration_ = 0;
  std::uint64_t env_steps_ = 0;
  StepCounter counter_;
  std::uint64_t collected_steps_ = 0;  // trajectory lengths this iteration
  std::chrono::steady_clock::time_point started_;
};

// Mean per-step policy entropy over the observations of `trajs`.
double mean_entropy(const learn::MlpPolicy& policy, std::span<const Trajectory> trajs);

// Loads "easy", "heldout" or a suite directory.
eval::EvalSuite resolve_suite(const std::string& name, int grid_size, int episodes);

}  // namespace ued::algos
