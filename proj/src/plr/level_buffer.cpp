#include "ued/plr/level_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "ued/core/errors.hpp"
#include "ued/learn/serialize.hpp"
#include "ued/minigrid/level_io.hpp"

namespace ued::plr {

void BufferConfig::validate() const {
  if (capacity < 1) throw FieldError("buffer_size", "must be at least 1");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw FieldError("temperature", "must be positive");
  }
  if (!(staleness_coef >= 0.0 && staleness_coef <= 1.0)) {
    throw FieldError("staleness_coefficient", "must lie in [0, 1]");
  }
  if (!(replay_rate >= 0.0 && replay_rate <= 1.0)) {
    throw FieldError("replay_rate", "must lie in [0, 1]");
  }
}

bool replay_decision(const BufferConfig& cfg, Rng& rng) { return bernoulli(rng, cfg.replay_rate); }

LevelBuffer::LevelBuffer(BufferConfig cfg) : cfg_(cfg) { cfg_.validate(); }

double LevelBuffer::min_score() const {
  if (entries_.empty()) throw std::logic_error("min_score of an empty buffer");
  double m = entries_.front().score;
  for (const auto& e : entries_) m = std::min(m, e.score);
  return m;
}

std::size_t LevelBuffer::find(std::uint64_t level_hash) const {
  const auto it = std::find(hashes_.begin(), hashes_.end(), level_hash);
  return static_cast<std::size_t>(it - hashes_.begin());
}

InsertOutcome LevelBuffer::maybe_insert(const MazeLevel& level, double score, std::int64_t step) {
  if (!std::isfinite(score)) throw std::invalid_argument("buffer score must be finite");
  const std::uint64_t h = level.hash();
  if (const std::size_t i = find(h); i < entries_.size()) {
    entries_[i].score = score;
    entries_[i].last_sampled_step = step;
    return InsertOutcome::kUpdated;
  }
  BufferEntry entry{level, score, step, step, next_order_++};
  if (!full()) {
    entries_.push_back(std::move(entry));
    hashes_.push_back(h);
    return InsertOutcome::kInserted;
  }
  // Evict the worst-ranked entry, i.e. the newest among those at the minimum.
  const auto order = rank_order();
  const std::size_t victim = order.back();
  if (!(score > entries_[victim].score)) {
    --next_order_;
    return InsertOutcome::kRejected;
  }
  entries_[victim] = std::move(entry);
  hashes_[victim] = h;
  return InsertOutcome::kInserted;
}

std::vector<std::size_t> LevelBuffer::rank_order() const {
  std::vector<std::size_t> idx(entries_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [this](std::size_t a, std::size_t b) {
    if (entries_[a].score != entries_[b].score) return entries_[a].score > entries_[b].score;
    return entries_[a].order < entries_[b].order;
  });
  return idx;
}

std::vector<double> LevelBuffer::sampling_distribution(std::int64_t global_step) const {
  const std::size_t n = entries_.size();
  std::vector<double> p(n, 0.0);
  if (n == 0) return p;

  std::vector<double> rank_w(n);
  const auto order = rank_order();
  for (std::size_t r = 0; r < n; ++r) {
    rank_w[order[r]] = std::pow(1.0 / static_cast<double>(r + 1), 1.0 / cfg_.temperature);
  }
  const double rank_total = std::accumulate(rank_w.begin(), rank_w.end(), 0.0);

  std::vector<double> stale_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    stale_w[i] = static_cast<double>(std::max<std::int64_t>(
        global_step - entries_[i].last_sampled_step, 0));
  }
  const double stale_total = std::accumulate(stale_w.begin(), stale_w.end(), 0.0);

  const double rho = cfg_.staleness_coef;
  for (std::size_t i = 0; i < n; ++i) {
    const double stale = stale_total > 0.0 ? stale_w[i] / stale_total : 1.0 / static_cast<double>(n);
    p[i] = (1.0 - rho) * rank_w[i] / rank_total + rho * stale;
  }
  return p;
}

std::size_t LevelBuffer::sample_index(std::int64_t global_step, Rng& rng) {
  if (entries_.empty()) throw std::logic_error("cannot sample from an empty level buffer");
  const auto p = sampling_distribution(global_step);
  const std::size_t i = ued::sample_index(rng, p);
  entries_[i].last_sampled_step = global_step;
  return i;
}

BufferEntry LevelBuffer::sample_level(std::int64_t global_step, Rng& rng) {
  return entries_[sample_index(global_step, rng)];
}

void LevelBuffer::update_score(std::size_t index, double score) {
  if (!std::isfinite(score)) throw std::invalid_argument("buffer score must be finite");
  entries_.at(index).score = score;
}

nlohmann::json LevelBuffer::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : entries_) {
    entries.push_back({{"level", minigrid::level_to_json(e.level)},
                       {"score", learn::encode_doubles(Eigen::VectorXd::Constant(1, e.score))},
                       {"last_sampled_step", e.last_sampled_step},
                       {"created_step", e.created_step},
                       {"order", e.order}});
  }
  return {{"capacity", cfg_.capacity},
          {"temperature", learn::encode_doubles(Eigen::VectorXd::Constant(1, cfg_.temperature))},
          {"staleness_coef",
           learn::encode_doubles(Eigen::VectorXd::Constant(1, cfg_.staleness_coef))},
          {"replay_rate", learn::encode_doubles(Eigen::VectorXd::Constant(1, cfg_.replay_rate))},
          {"next_order", next_order_},
          {"entries", entries}};
}

LevelBuffer LevelBuffer::from_json(const nlohmann::json& j) {
  auto scalar = [&j](const char* key) {
    const auto v = learn::decode_doubles(j.at(key).get<std::string>());
    if (v.size() != 1) throw FieldError(key, "expected one value");
    return v[0];
  };
  BufferConfig cfg;
  cfg.capacity = j.at("capacity").get<int>();
  cfg.temperature = scalar("temperature");
  cfg.staleness_coef = scalar("staleness_coef");
  cfg.replay_rate = scalar("replay_rate");
  LevelBuffer buf(cfg);
  buf.next_order_ = j.at("next_order").get<std::uint64_t>();
  for (const auto& e : j.at("entries")) {
    BufferEntry entry;
    entry.level = minigrid::level_from_json(e.at("level"));
    entry.score = learn::decode_doubles(e.at("score").get<std::string>())[0];
    entry.last_sampled_step = e.at("last_sampled_step").get<std::int64_t>();
    entry.created_step = e.at("created_step").get<std::int64_t>();
    entry.order = e.at("order").get<std::uint64_t>();
    buf.hashes_.push_back(entry.level.hash());
    buf.entries_.push_back(std::move(entry));
  }
  if (buf.entries_.size() > static_cast<std::size_t>(cfg.capacity)) {
    throw FieldError("entries", "more entries than capacity");
  }
  return buf;
}

void LevelBuffer::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json().dump() << '\n';
}

LevelBuffer LevelBuffer::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return from_json(nlohmann::json::parse(in));
}

namespace {

minigrid::Cell random_interior(const MazeLevel& level, Rng& rng) {
  return {uniform_int(rng, 1, level.height() - 2), uniform_int(rng, 1, level.width() - 2)};
}

}  // namespace

std::optional<MazeLevel> apply_edit(const MazeLevel& level, EditKind kind, Rng& rng) {
  MazeLevel out = level;
  const auto c = random_interior(level, rng);
  switch (kind) {
    case EditKind::kToggleWall:
      out.set_wall(c, !level.is_wall(c));
      break;
    case EditKind::kMoveGoal:
      if (c == level.goal_pos()) return std::nullopt;
      out.set_goal(c);
      break;
    case EditKind::kMoveAgent:
      if (c == level.agent_pos()) return std::nullopt;
      out.set_agent(c, level.agent_dir());
      break;
  }
  if (!out.is_valid()) return std::nullopt;
  return out;
}

MazeLevel edit_level(const MazeLevel& level, int n_edits, Rng& rng) {
  if (n_edits < 1) throw FieldError("n_edits", "must be at least 1");
  MazeLevel current = level;
  for (int e = 0; e < n_edits; ++e) {
    const auto kind = static_cast<EditKind>(uniform_int(rng, 0, 2));
    for (int attempt = 0; attempt < 10; ++attempt) {
      if (auto candidate = apply_edit(current, kind, rng)) {
        current = std::move(*candidate);
        break;
      }
    }
  }
  return current;
}

}  // namespace ued::plr
