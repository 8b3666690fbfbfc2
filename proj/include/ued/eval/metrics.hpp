#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ued/core/pomdp.hpp"
#include "ued/core/rng.hpp"
#include "ued/minigrid/student_env.hpp"
#include "ued/minigrid/suites.hpp"

namespace ued::eval {

struct EvalSuite {
  std::vector<minigrid::NamedLevel> levels;
  int episodes = 100;  // per level per seed

  // Throws FieldError when a level is invalid or a name repeats.
  void validate() const;
};

// A suite directory holds one level file per maze plus manifest.json listing
// {name, file, hash} in order. load_suite accepts the directory or the
// manifest path and rejects hash mismatches.
void save_suite(const std::filesystem::path& dir, const EvalSuite& suite);
EvalSuite load_suite(const std::filesystem::path& path);

struct SolvedRate {
  std::vector<std::string> names;
  std::vector<double> mean;  // per level, over seeds
  std::vector<double> sd;    // sample standard deviation over seeds, 0 for one seed
  std::vector<std::vector<double>> per_seed;  // [seed][level]

  double overall() const;  // mean of the per-level means
};

// An episode counts as solved iff the goal is reached within max_steps.
SolvedRate solved_rate(const Policy& policy, const EvalSuite& suite, int seeds, Rng& rng,
                       int max_steps = minigrid::kDefaultMaxSteps);

// Trimmed mean dropping floor(n/4) scores from each end. Needs n >= 4.
double iqm(std::span<const double> scores);

// Mean shortfall below the ceiling.
double optimality_gap(std::span<const double> scores, double ceiling = 1.0);

using Statistic = std::function<double(std::span<const double>)>;

// Percentile bootstrap interval.
std::pair<double, double> bootstrap_ci(std::span<const double> scores, const Statistic& statistic,
                                       Rng& rng, int n_resamples = 2000, double level = 0.95);

double mean(std::span<const double> xs);

}  // namespace ued::eval
