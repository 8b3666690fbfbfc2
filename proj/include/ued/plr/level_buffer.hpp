#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ued/core/rng.hpp"
#include "ued/minigrid/maze_level.hpp"

namespace ued::plr {

using minigrid::MazeLevel;

struct BufferConfig {
  int capacity = 4000;          // K
  double temperature = 0.3;     // beta
  double staleness_coef = 0.5;  // rho
  double replay_rate = 0.5;     // p

  void validate() const;  // throws FieldError
};

struct BufferEntry {
  MazeLevel level;
  double score = 0.0;
  std::int64_t last_sampled_step = 0;
  std::int64_t created_step = 0;
  std::uint64_t order = 0;  // insertion sequence, breaks score ties
};

// d ~ Bernoulli(p).
bool replay_decision(const BufferConfig& cfg, Rng& rng);

enum class InsertOutcome { kInserted, kUpdated, kRejected };

// Score-curated level store with rank prioritisation and staleness mixing.
class LevelBuffer {
 public:
  explicit LevelBuffer(BufferConfig cfg = {});

  const BufferConfig& config() const { return cfg_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool full() const { return entries_.size() >= static_cast<std::size_t>(cfg_.capacity); }
  const std::vector<BufferEntry>& entries() const { return entries_; }
  double min_score() const;  // requires !empty()

  // Inserts while there is room; once full, replaces the lowest-scoring entry
  // only on a strictly higher score. A level already present has its score
  // replaced and its staleness reset instead.
  InsertOutcome maybe_insert(const MazeLevel& level, double score, std::int64_t step);

  // (1 - rho) * P_rank + rho * P_stale, in entry order.
  std::vector<double> sampling_distribution(std::int64_t global_step) const;

  // Draws an entry index and marks it sampled at global_step. Throws
  // std::logic_error on an empty buffer.
  std::size_t sample_index(std::int64_t global_step, Rng& rng);
  BufferEntry sample_level(std::int64_t global_step, Rng& rng);

  void update_score(std::size_t index, double score);
  // Index of the level with this hash, or size() when absent.
  std::size_t find(std::uint64_t level_hash) const;

  nlohmann::json to_json() const;
  static LevelBuffer from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static LevelBuffer load(const std::filesystem::path& path);

 private:
  std::vector<std::size_t> rank_order() const;  // indices, best first

  BufferConfig cfg_;
  std::vector<BufferEntry> entries_;
  std::vector<std::uint64_t> hashes_;
  std::uint64_t next_order_ = 0;
};

enum class EditKind { kToggleWall = 0, kMoveGoal = 1, kMoveAgent = 2 };

// One edit of the given kind at a random interior cell; nullopt when the draw
// does not give a valid level (wall on the agent, goal onto itself, ...).
std::optional<MazeLevel> apply_edit(const MazeLevel& level, EditKind kind, Rng& rng);

// n_edits independent uniformly chosen edits. Each is retried up to 10 times
// until the level validates, then skipped.
MazeLevel edit_level(const MazeLevel& level, int n_edits, Rng& rng);

}  // namespace ued::plr
