#include "ued/algos/trainer.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ued/core/errors.hpp"
#include "ued/learn/distributions.hpp"
#include "ued/learn/serialize.hpp"
#include "ued/minigrid/complexity.hpp"
#include "ued/minigrid/designer.hpp"
#include "ued/minigrid/student_env.hpp"
#include "ued/minigrid/suites.hpp"
#include "ued/regret/regret.hpp"

namespace ued::algos {

namespace {

constexpr int kCheckpointVersion = 1;

enum StreamTag : std::uint64_t {
  kTeacherStream = 1,
  kProtagonistStream = 2,
  kAntagonistStream = 3,
  kLevelStream = 4,
  kBufferStream = 5,
  kEvalStream = 6,
  kInitStream = 100,
};

RoleState make_role(learn::MlpShape shape, std::uint64_t seed, std::uint64_t tag) {
  Rng init = make_rng(seed, {kInitStream, tag});
  RoleState role{learn::MlpPolicy::initialized(shape, init), {}, {}, make_rng(seed, {tag})};
  role.adam = learn::AdamState::for_policy(role.policy);
  return role;
}

nlohmann::json role_to_json(const RoleState& r) {
  return {{"policy", learn::to_json(r.policy)},
          {"adam", learn::to_json(r.adam)},
          {"normalizer", learn::to_json(r.normalizer)},
          {"rng", rng_state(r.rng)}};
}

void role_from_json(RoleState& r, const nlohmann::json& j) {
  auto policy = learn::policy_from_json(j.at("policy"));
  if (!(policy.shape() == r.policy.shape())) {
    throw FieldError("policy", "checkpoint network shape does not match the config");
  }
  r.policy = std::move(policy);
  r.adam = learn::adam_from_json(j.at("adam"));
  r.normalizer = learn::normalizer_from_json(j.at("normalizer"));
  r.rng = rng_from_state(j.at("rng").get<std::string>());
}

double mean_or_zero(std::span<const double> xs) { return eval::mean(xs); }

}  // namespace

double mean_entropy(const learn::MlpPolicy& policy, std::span<const Trajectory> trajs) {
  std::size_t steps = 0;
  for (const auto& t : trajs) steps += t.length();
  if (steps == 0) return 0.0;
  const int d = policy.shape().observation_size;
  Eigen::MatrixXd obs(d, static_cast<Eigen::Index>(steps));
  Eigen::Index col = 0;
  for (const auto& t : trajs) {
    for (const auto& o : t.observations) {
      obs.col(col++) = Eigen::Map<const Eigen::VectorXd>(o.data(), d);
    }
  }
  const auto cache = policy.forward(obs);
  double total = 0.0;
  std::vector<double> logits(static_cast<std::size_t>(cache.logits.rows()));
  for (Eigen::Index c = 0; c < cache.logits.cols(); ++c) {
    Eigen::Map<Eigen::VectorXd>(logits.data(), cache.logits.rows()) = cache.logits.col(c);
    total += learn::policy_entropy(logits);
  }
  return total / static_cast<double>(steps);
}

eval::EvalSuite resolve_suite(const std::string& name, int grid_size, int episodes) {
  eval::EvalSuite suite;
  if (name == "easy") {
    suite.levels = minigrid::easy_suite(0, grid_size);
  } else if (name == "heldout") {
    suite.levels = minigrid::generate_suite("heldout", 0);
  } else {
    suite = eval::load_suite(name);
  }
  suite.episodes = episodes;
  suite.validate();
  return suite;
}

Trainer::Trainer(RunConfig cfg)
    : cfg_(std::move(cfg)),
      buffer_((cfg_.validate(), cfg_.buffer)),
      level_rng_(make_rng(cfg_.seed, {kLevelStream})),
      buffer_rng_(make_rng(cfg_.seed, {kBufferStream})),
      eval_rng_(make_rng(cfg_.seed, {kEvalStream})),
      started_(std::chrono::steady_clock::now()) {
  const learn::MlpShape student{minigrid::kObservationSize, cfg_.hidden, minigrid::kStudentActions};
  const int g = cfg_.grid_size;
  const learn::MlpShape designer{
      minigrid::designer_observation_size(g, g, cfg_.budget.max_budget()), cfg_.hidden, g * g};
  protagonist_ = make_role(student, cfg_.seed, kProtagonistStream);
  antagonist_ = make_role(student, cfg_.seed, kAntagonistStream);
  teacher_ = make_role(designer, cfg_.seed, kTeacherStream);
  if (!cfg_.eval_suite.empty()) {
    suite_ = resolve_suite(cfg_.eval_suite, g, cfg_.eval_suite_episodes);
  }
}

MazeLevel Trainer::random_level() {
  return minigrid::random_level(cfg_.grid_size, cfg_.grid_size, cfg_.budget, level_rng_);
}

Trainer::Collected Trainer::collect(RoleState& role, std::span<const MazeLevel> levels) {
  Collected out;
  for (const auto& level : levels) {
    double total = 0.0;
    for (int e = 0; e < cfg_.eval_episodes; ++e) {
      minigrid::MazeEnv env(level, cfg_.max_steps);
      out.trajectories.push_back(rollout(role.policy, env, cfg_.max_steps, role.rng, &counter_));
      collected_steps_ += out.trajectories.back().length();
      total += undiscounted_return(out.trajectories.back());
    }
    out.level_returns.push_back(total / cfg_.eval_episodes);
  }
  return out;
}

void Trainer::update(RoleState& role, const learn::PpoConfig& ppo,
                     std::span<const Trajectory> trajs, const learn::MlpPolicy* distill_target) {
  auto batch = learn::make_batch(trajs, ppo.gamma, ppo.gae_lambda,
                                 ppo.normalize_returns ? &role.normalizer : nullptr);
  if (distill_target) {
    const learn::Distillation distill{distill_target, cfg_.distill};
    learn::ppo_update(role.policy, role.adam, batch, ppo, role.rng, &distill);
  } else {
    learn::ppo_update(role.policy, role.adam, batch, ppo, role.rng);
  }
}

void Trainer::finish(IterationStats& stats, std::uint64_t steps_before) {
  stats.env_steps = counter_.value() - steps_before;
  if (stats.env_steps != collected_steps_) {
    throw std::logic_error("step accounting mismatch: counter " + std::to_string(stats.env_steps) +
                           " vs trajectories " + std::to_string(collected_steps_));
  }
  collected_steps_ = 0;
  env_steps_ += stats.env_steps;
  ++iteration_;
}

IterationStats Trainer::step() {
  switch (cfg_.algorithm) {
    case Algorithm::kDomainRandomization: return domain_randomization_iteration();
    case Algorithm::kRobustPlr: return plr_robust_iteration();
    case Algorithm::kPaired: return paired_iteration();
    case Algorithm::kPairedBc: return paired_bc_iteration();
    case Algorithm::kPairedEvo:
    case Algorithm::kFlexPairedEvo: return paired_evo_iteration();
  }
  throw std::logic_error("unhandled algorithm");
}

IterationStats Trainer::paired_iteration() { return paired_like(false); }

IterationStats Trainer::paired_bc_iteration() { return paired_like(true); }

IterationStats Trainer::paired_like(bool with_distill) {
  const auto direction = with_distill ? cfg_.distill.direction : learn::DistillDirection::kOff;
  const std::uint64_t before = counter_.value();
  const RoleState p0 = protagonist_, a0 = antagonist_, t0 = teacher_;
  IterationStats stats;
  try {
    const int g = cfg_.grid_size;
    const int levels = cfg_.protagonist.workers;
    std::vector<Trajectory>& designs = stats.teacher_trajectories;
    for (int w = 0; w < levels; ++w) {
      const int budget = minigrid::sample_budget(cfg_.budget, teacher_.rng);
      minigrid::DesignerEnv designer(g, g, budget, cfg_.budget.max_budget(),
                                     minigrid::sample_noise(teacher_.rng));
      designs.push_back(rollout(teacher_.policy, designer, designer.state().episode_length(),
                                teacher_.rng));
      stats.levels.push_back(designer.level());
    }

    const auto tp = collect(protagonist_, stats.levels);
    const learn::MlpPolicy a_snapshot = antagonist_.policy;
    update(protagonist_, cfg_.protagonist, tp.trajectories,
           direction != learn::DistillDirection::kOff ? &a_snapshot : nullptr);

    const auto ta = collect(antagonist_, stats.levels);
    const learn::MlpPolicy p_snapshot = protagonist_.policy;
    update(antagonist_, cfg_.antagonist, ta.trajectories,
           direction == learn::DistillDirection::kBidirectional ? &p_snapshot : nullptr);

    for (int w = 0; w < levels; ++w) {
      const double r = regret::relative_regret(ta.level_returns[w], tp.level_returns[w]);
      if (!std::isfinite(r)) {
        std::ostringstream msg;
        msg << "non-finite regret on level " << hash_hex(stats.levels[w].hash())
            << " (return_A=" << ta.level_returns[w] << ", return_P=" << tp.level_returns[w] << ")";
        throw std::runtime_error(msg.str());
      }
      stats.scores.push_back(r);
      designs[w].rewards.back() = r;
    }
    stats.teacher_entropy = mean_entropy(teacher_.policy, designs);
    update(teacher_, cfg_.teacher, designs, nullptr);

    for (const auto& t : tp.trajectories) stats.returns_p.push_back(undiscounted_return(t));
    for (const auto& t : ta.trajectories) stats.returns_a.push_back(undiscounted_return(t));
    stats.student_entropy = mean_entropy(p0.policy, tp.trajectories);
    stats.protagonist_updated = stats.antagonist_updated = stats.teacher_updated = true;
  } catch (...) {
    protagonist_ = p0;
    antagonist_ = a0;
    teacher_ = t0;
    counter_.reset();
    counter_.add(before);
    collected_steps_ = 0;
    throw;
  }
  finish(stats, before);
  return stats;
}

IterationStats Trainer::paired_evo_iteration() {
  const bool flexible = cfg_.algorithm == Algorithm::kFlexPairedEvo;
  const std::uint64_t before = counter_.value();
  const int levels = cfg_.protagonist.workers;
  IterationStats stats;

  auto score_levels = [&](std::span<const MazeLevel> batch) {
    const auto tp = collect(protagonist_, batch);
    const auto ta = collect(antagonist_, batch);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ScoredLevel s{batch[i].hash(), tp.level_returns[i], ta.level_returns[i], 0.0,
                    plr::InsertOutcome::kRejected};
      s.score = flexible ? regret::flexible_regret(s.return_a, s.return_p).score
                         : regret::relative_regret(s.return_a, s.return_p);
      s.outcome = buffer_.maybe_insert(batch[i], s.score, iteration_);
      stats.scores.push_back(s.score);
      stats.scored.push_back(s);
    }
    for (const auto& t : tp.trajectories) stats.returns_p.push_back(undiscounted_return(t));
    for (const auto& t : ta.trajectories) stats.returns_a.push_back(undiscounted_return(t));
    return tp;
  };

  stats.replayed = !buffer_.empty() && plr::replay_decision(cfg_.buffer, buffer_rng_);
  if (!stats.replayed) {
    for (int w = 0; w < levels; ++w) stats.levels.push_back(random_level());
    const auto tp = score_levels(stats.levels);
    stats.student_entropy = mean_entropy(protagonist_.policy, tp.trajectories);
  } else {
    for (int w = 0; w < levels; ++w) {
      stats.levels.push_back(buffer_.sample_level(iteration_, buffer_rng_).level);
    }
    const auto direction = cfg_.distill.direction;
    const auto tp = collect(protagonist_, stats.levels);
    stats.student_entropy = mean_entropy(protagonist_.policy, tp.trajectories);
    const learn::MlpPolicy a_snapshot = antagonist_.policy;
    update(protagonist_, cfg_.protagonist, tp.trajectories,
           direction != learn::DistillDirection::kOff ? &a_snapshot : nullptr);
    const auto ta = collect(antagonist_, stats.levels);
    const learn::MlpPolicy p_snapshot = protagonist_.policy;
    update(antagonist_, cfg_.antagonist, ta.trajectories,
           direction == learn::DistillDirection::kBidirectional ? &p_snapshot : nullptr);
    for (const auto& t : tp.trajectories) stats.returns_p.push_back(undiscounted_return(t));
    for (const auto& t : ta.trajectories) stats.returns_a.push_back(undiscounted_return(t));
    stats.protagonist_updated = stats.antagonist_updated = true;

    // Re-score the replayed levels after the update, then score their edits.
    std::vector<MazeLevel> rescored = stats.levels;
    for (const auto& l : stats.levels) rescored.push_back(plr::edit_level(l, cfg_.n_edits, level_rng_));
    score_levels(rescored);
  }
  finish(stats, before);
  return stats;
}

IterationStats Trainer::plr_robust_iteration() {
  const std::uint64_t before = counter_.value();
  const int levels = cfg_.protagonist.workers;
  const double gamma = cfg_.protagonist.gamma, lambda = cfg_.protagonist.gae_lambda;
  IterationStats stats;

  auto level_pvl = [&](const Collected& c, std::size_t level) {
    double total = 0.0;
    for (int e = 0; e < cfg_.eval_episodes; ++e) {
      total += regret::positive_value_loss(
          c.trajectories[level * static_cast<std::size_t>(cfg_.eval_episodes) + e], gamma, lambda);
    }
    return total / cfg_.eval_episodes;
  };

  stats.replayed = !buffer_.empty() && plr::replay_decision(cfg_.buffer, buffer_rng_);
  Collected tp;
  if (!stats.replayed) {
    for (int w = 0; w < levels; ++w) stats.levels.push_back(random_level());
    tp = collect(protagonist_, stats.levels);
    for (std::size_t i = 0; i < stats.levels.size(); ++i) {
      ScoredLevel s{stats.levels[i].hash(), tp.level_returns[i], 0.0, level_pvl(tp, i),
                    plr::InsertOutcome::kRejected};
      s.outcome = buffer_.maybe_insert(stats.levels[i], s.score, iteration_);
      stats.scores.push_back(s.score);
      stats.scored.push_back(s);
    }
    stats.student_entropy = mean_entropy(protagonist_.policy, tp.trajectories);
  } else {
    std::vector<std::size_t> picked;
    for (int w = 0; w < levels; ++w) {
      picked.push_back(buffer_.sample_index(iteration_, buffer_rng_));
      stats.levels.push_back(buffer_.entries()[picked.back()].level);
    }
    tp = collect(protagonist_, stats.levels);
    stats.student_entropy = mean_entropy(protagonist_.policy, tp.trajectories);
    for (std::size_t i = 0; i < picked.size(); ++i) {
      const double s = level_pvl(tp, i);
      buffer_.update_score(picked[i], s);
      stats.scores.push_back(s);
    }
    update(protagonist_, cfg_.protagonist, tp.trajectories, nullptr);
    stats.protagonist_updated = true;
  }
  for (const auto& t : tp.trajectories) stats.returns_p.push_back(undiscounted_return(t));
  finish(stats, before);
  return stats;
}

IterationStats Trainer::domain_randomization_iteration() {
  const std::uint64_t before = counter_.value();
  IterationStats stats;
  for (int w = 0; w < cfg_.protagonist.workers; ++w) stats.levels.push_back(random_level());
  const auto tp = collect(protagonist_, stats.levels);
  stats.student_entropy = mean_entropy(protagonist_.policy, tp.trajectories);
  update(protagonist_, cfg_.protagonist, tp.trajectories, nullptr);
  stats.protagonist_updated = !tp.trajectories.empty();
  for (const auto& t : tp.trajectories) stats.returns_p.push_back(undiscounted_return(t));
  finish(stats, before);
  return stats;
}

MetricsRow Trainer::metrics(const IterationStats& stats) {
  MetricsRow row;
  row.iteration = iteration_;
  row.env_steps = env_steps_;
  row.return_p = mean_or_zero(stats.returns_p);
  row.return_a = mean_or_zero(stats.returns_a);
  row.regret = mean_or_zero(stats.scores);
  row.teacher_entropy = stats.teacher_entropy;
  row.student_entropy = stats.student_entropy;
  std::vector<double> blocks, paths;
  for (const auto& l : stats.levels) {
    blocks.push_back(minigrid::block_count(l));
    paths.push_back(minigrid::shortest_path_len(l));
  }
  row.block_count_mean = mean_or_zero(blocks);
  row.shortest_path_mean = mean_or_zero(paths);
  if (suite_) {
    row.solved_rate_eval =
        eval::solved_rate(protagonist_.policy, *suite_, 1, eval_rng_, cfg_.max_steps).overall();
  }
  if (cfg_.record_wallclock) {
    row.wallclock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  }
  return row;
}

void Trainer::run_until(std::int64_t target, std::ostream* csv) {
  while (iteration_ < target) {
    const auto stats = step();
    if (iteration_ % cfg_.log_interval == 0) {
      const auto row = metrics(stats);
      if (csv) *csv << to_csv_row(row) << '\n' << std::flush;
    }
  }
}

nlohmann::json Trainer::checkpoint() const {
  return {{"version", kCheckpointVersion},
          {"config", to_config_text(cfg_)},
          {"iteration", iteration_},
          {"env_steps", env_steps_},
          {"protagonist", role_to_json(protagonist_)},
          {"antagonist", role_to_json(antagonist_)},
          {"teacher", role_to_json(teacher_)},
          {"buffer", buffer_.to_json()},
          {"level_rng", rng_state(level_rng_)},
          {"buffer_rng", rng_state(buffer_rng_)},
          {"eval_rng", rng_state(eval_rng_)}};
}

Trainer Trainer::from_checkpoint(const nlohmann::json& j) {
  if (j.at("version").get<int>() != kCheckpointVersion) {
    throw FieldError("version", "unsupported checkpoint version");
  }
  Trainer t(parse_config(j.at("config").get<std::string>()));
  t.iteration_ = j.at("iteration").get<std::int64_t>();
  t.env_steps_ = j.at("env_steps").get<std::uint64_t>();
  t.counter_.add(t.env_steps_);
  role_from_json(t.protagonist_, j.at("protagonist"));
  role_from_json(t.antagonist_, j.at("antagonist"));
  role_from_json(t.teacher_, j.at("teacher"));
  t.buffer_ = plr::LevelBuffer::from_json(j.at("buffer"));
  t.level_rng_ = rng_from_state(j.at("level_rng").get<std::string>());
  t.buffer_rng_ = rng_from_state(j.at("buffer_rng").get<std::string>());
  t.eval_rng_ = rng_from_state(j.at("eval_rng").get<std::string>());
  return t;
}

void Trainer::save_checkpoint(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << checkpoint().dump() << '\n';
}

Trainer Trainer::load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return from_checkpoint(nlohmann::json::parse(in));
}

}  // namespace ued::algos
