#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ued/learn/ppo.hpp"
#include "ued/minigrid/designer.hpp"
#include "ued/minigrid/student_env.hpp"
#include "ued/plr/level_buffer.hpp"

namespace ued::algos {

enum class Algorithm {
  kDomainRandomization,
  kRobustPlr,
  kPaired,
  kPairedBc,
  kPairedEvo,
  kFlexPairedEvo,
};

// dr, robust_plr, paired, paired_bc, paired_evo, flexpaired_evo
Algorithm parse_algorithm(const std::string& id);
std::string to_string(Algorithm a);

bool uses_antagonist(Algorithm a);
bool uses_teacher(Algorithm a);
bool uses_buffer(Algorithm a);

struct RunConfig {
  Algorithm algorithm = Algorithm::kPaired;
  std::uint64_t seed = 0;
  int iterations = 100;
  int grid_size = minigrid::kDefaultGridSize;
  minigrid::BudgetMode budget = minigrid::BudgetMode::fixed(25);
  int max_steps = minigrid::kDefaultMaxSteps;
  int eval_episodes = 1;  // E, episodes per student per level
  int hidden = 64;
  int log_interval = 1;
  int n_edits = 5;
  // "", "easy", "heldout", or a suite directory.
  std::string eval_suite;
  int eval_suite_episodes = 10;
  bool record_wallclock = false;

  learn::PpoConfig protagonist;
  learn::PpoConfig antagonist;
  learn::PpoConfig teacher;
  learn::DistillConfig distill;
  plr::BufferConfig buffer;

  void validate() const;  // throws FieldError naming the key
};

// Defaults for an algorithm, including its replay rate.
RunConfig default_config(Algorithm a);

// key = value text with sections [run], [ppo], [protagonist], [antagonist],
// [teacher], [bc], [buffer], keyed by hyperparameter-table names
// (adam_learning_rate, ppo_epochs, kl_loss_interval, ...). [ppo] sets every
// role; role sections override it. Unknown sections or keys, and invalid
// values, throw FieldError naming "section.key".
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical text that parse_config reads back to an identical config.
std::string to_config_text(const RunConfig& cfg);

}  // namespace ued::algos
