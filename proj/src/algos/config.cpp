#include "ued/algos/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ued/core/errors.hpp"

namespace ued::algos {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, Algorithm>& algorithm_names() {
  static const std::map<std::string, Algorithm> names{
      {"dr", Algorithm::kDomainRandomization}, {"robust_plr", Algorithm::kRobustPlr},
      {"paired", Algorithm::kPaired},          {"paired_bc", Algorithm::kPairedBc},
      {"paired_evo", Algorithm::kPairedEvo},   {"flexpaired_evo", Algorithm::kFlexPairedEvo},
  };
  return names;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <typename T>
T convert(const std::string& key, const std::string& raw) {
  std::istringstream in(raw);
  T value{};
  in >> value;
  if (!in || !(in >> std::ws).eof()) throw FieldError(key, "cannot parse '" + raw + "'");
  return value;
}

bool to_bool(const std::string& key, const std::string& raw) {
  if (raw == "true" || raw == "yes" || raw == "1") return true;
  if (raw == "false" || raw == "no" || raw == "0") return false;
  throw FieldError(key, "expected a boolean, got '" + raw + "'");
}

minigrid::BudgetMode parse_budget(const std::string& raw) {
  const auto dash = raw.find('-');
  if (dash == std::string::npos) return minigrid::BudgetMode::fixed(convert<int>("budget", raw));
  return minigrid::BudgetMode::uniform(convert<int>("budget", raw.substr(0, dash)),
                                       convert<int>("budget", raw.substr(dash + 1)));
}

std::string budget_text(const minigrid::BudgetMode& b) {
  if (b.kind == minigrid::BudgetMode::Kind::kFixed) return std::to_string(b.lo);
  return std::to_string(b.lo) + "-" + std::to_string(b.hi);
}

// Applies one PPO key; returns false when the key is not a PPO key.
bool apply_ppo_key(learn::PpoConfig& c, const std::string& key, const std::string& raw) {
  const std::string& k = key;
  if (k == "gamma") c.gamma = convert<double>(k, raw);
  else if (k == "lambda_gae") c.gae_lambda = convert<double>(k, raw);
  else if (k == "ppo_rollout_length") c.rollout_length = convert<int>(k, raw);
  else if (k == "ppo_epochs") c.epochs = convert<int>(k, raw);
  else if (k == "ppo_minibatches_per_epoch") c.minibatches = convert<int>(k, raw);
  else if (k == "ppo_clip_range") c.clip_range = convert<double>(k, raw);
  else if (k == "ppo_number_of_workers") c.workers = convert<int>(k, raw);
  else if (k == "adam_learning_rate") c.learning_rate = convert<double>(k, raw);
  else if (k == "adam_epsilon") c.adam_epsilon = convert<double>(k, raw);
  else if (k == "ppo_max_gradient_norm") c.max_grad_norm = convert<double>(k, raw);
  else if (k == "ppo_value_clipping") c.clip_value = to_bool(k, raw);
  else if (k == "return_normalization") c.normalize_returns = to_bool(k, raw);
  else if (k == "value_loss_coefficient") c.value_loss_coef = convert<double>(k, raw);
  else if (k == "entropy_coefficient") c.entropy_coef = convert<double>(k, raw);
  else return false;
  return true;
}

void write_ppo(std::ostream& out, const learn::PpoConfig& c) {
  out << "gamma = " << fmt(c.gamma) << "\n"
      << "lambda_gae = " << fmt(c.gae_lambda) << "\n"
      << "ppo_rollout_length = " << c.rollout_length << "\n"
      << "ppo_epochs = " << c.epochs << "\n"
      << "ppo_minibatches_per_epoch = " << c.minibatches << "\n"
      << "ppo_clip_range = " << fmt(c.clip_range) << "\n"
      << "ppo_number_of_workers = " << c.workers << "\n"
      << "adam_learning_rate = " << fmt(c.learning_rate) << "\n"
      << "adam_epsilon = " << fmt(c.adam_epsilon) << "\n"
      << "ppo_max_gradient_norm = " << fmt(c.max_grad_norm) << "\n"
      << "ppo_value_clipping = " << (c.clip_value ? "true" : "false") << "\n"
      << "return_normalization = " << (c.normalize_returns ? "true" : "false") << "\n"
      << "value_loss_coefficient = " << fmt(c.value_loss_coef) << "\n"
      << "entropy_coefficient = " << fmt(c.entropy_coef) << "\n";
}

}  // namespace

Algorithm parse_algorithm(const std::string& id) {
  const auto it = algorithm_names().find(id);
  if (it == algorithm_names().end()) throw FieldError("algorithm", "unknown algorithm '" + id + "'");
  return it->second;
}

std::string to_string(Algorithm a) {
  for (const auto& [name, value] : algorithm_names()) {
    if (value == a) return name;
  }
  return "unknown";
}

bool uses_antagonist(Algorithm a) {
  return a == Algorithm::kPaired || a == Algorithm::kPairedBc || a == Algorithm::kPairedEvo ||
         a == Algorithm::kFlexPairedEvo;
}

bool uses_teacher(Algorithm a) { return a == Algorithm::kPaired || a == Algorithm::kPairedBc; }

bool uses_buffer(Algorithm a) {
  return a == Algorithm::kRobustPlr || a == Algorithm::kPairedEvo ||
         a == Algorithm::kFlexPairedEvo;
}

RunConfig default_config(Algorithm a) {
  RunConfig cfg;
  cfg.algorithm = a;
  cfg.buffer.replay_rate = a == Algorithm::kFlexPairedEvo ? 0.9 : 0.5;
  if (a == Algorithm::kPairedBc) {
    cfg.distill = {0.01, 5, learn::DistillDirection::kBidirectional};
  }
  return cfg;
}

void RunConfig::validate() const {
  if (iterations < 0) throw FieldError("iterations", "must be non-negative");
  if (grid_size < 3 || grid_size > 64) throw FieldError("grid_size", "must lie in [3, 64]");
  budget.validate();
  if (max_steps < 1) throw FieldError("max_steps", "must be at least 1");
  if (eval_episodes < 1) throw FieldError("eval_episodes", "must be at least 1");
  if (hidden < 1) throw FieldError("hidden", "must be at least 1");
  if (log_interval < 1) throw FieldError("log_interval", "must be at least 1");
  if (n_edits < 1) throw FieldError("n_edits", "must be at least 1");
  if (eval_suite_episodes < 1) throw FieldError("eval_suite_episodes", "must be at least 1");
  protagonist.validate();
  if (uses_antagonist(algorithm)) antagonist.validate();
  if (uses_teacher(algorithm)) teacher.validate();
  distill.validate();
  if (uses_buffer(algorithm)) buffer.validate();
  if (algorithm == Algorithm::kPaired && distill.direction != learn::DistillDirection::kOff) {
    throw FieldError("kl_loss_direction", "paired runs without distillation; use paired_bc");
  }
  if (algorithm == Algorithm::kPairedBc && distill.direction == learn::DistillDirection::kOff) {
    throw FieldError("kl_loss_direction", "paired_bc needs a distillation direction");
  }
  if ((algorithm == Algorithm::kDomainRandomization || algorithm == Algorithm::kRobustPlr) &&
      distill.direction != learn::DistillDirection::kOff) {
    throw FieldError("kl_loss_direction", "single-student algorithms cannot distil");
  }
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw FieldError("config", e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  static const std::set<std::string> sections{"run",     "ppo",     "protagonist", "antagonist",
                                              "teacher", "bc",      "buffer"};
  for (const auto& [name, node] : tree) {
    if (!sections.count(name)) {
      throw FieldError(name, node.empty() ? "keys must live inside a section" : "unknown section");
    }
  }
  auto section = [&tree](const char* name) {
    const auto it = tree.find(name);
    return it == tree.not_found() ? pt::ptree{} : it->second;
  };

  const auto run = section("run");
  const auto alg_it = run.find("algorithm");
  Algorithm alg = Algorithm::kPaired;
  if (alg_it != run.not_found()) {
    try {
      alg = parse_algorithm(alg_it->second.get_value<std::string>());
    } catch (const FieldError& e) {
      throw FieldError("run.algorithm", std::string(e.what()).substr(e.field().size() + 2));
    }
  }
  RunConfig cfg = default_config(alg);

  for (const auto& [key, node] : run) {
    const auto raw = node.get_value<std::string>();
    const std::string qk = "run." + key;
    if (key == "algorithm") continue;
    if (key == "seed") cfg.seed = convert<std::uint64_t>(qk, raw);
    else if (key == "iterations") cfg.iterations = convert<int>(qk, raw);
    else if (key == "grid_size") cfg.grid_size = convert<int>(qk, raw);
    else if (key == "budget") cfg.budget = parse_budget(raw);
    else if (key == "max_steps") cfg.max_steps = convert<int>(qk, raw);
    else if (key == "eval_episodes") cfg.eval_episodes = convert<int>(qk, raw);
    else if (key == "hidden") cfg.hidden = convert<int>(qk, raw);
    else if (key == "log_interval") cfg.log_interval = convert<int>(qk, raw);
    else if (key == "n_edits") cfg.n_edits = convert<int>(qk, raw);
    else if (key == "eval_suite") cfg.eval_suite = raw;
    else if (key == "eval_suite_episodes") cfg.eval_suite_episodes = convert<int>(qk, raw);
    else if (key == "record_wallclock") cfg.record_wallclock = to_bool(qk, raw);
    else throw FieldError(qk, "unknown key");
  }

  // [ppo] carries the shared values plus the two table entropy knobs.
  std::optional<double> student_entropy, generator_entropy;
  for (const auto& [key, node] : section("ppo")) {
    const auto raw = node.get_value<std::string>();
    const std::string qk = "ppo." + key;
    if (key == "student_entropy_coefficient") {
      student_entropy = convert<double>(qk, raw);
    } else if (key == "generator_entropy_coefficient") {
      generator_entropy = convert<double>(qk, raw);
    } else {
      const bool known = apply_ppo_key(cfg.protagonist, key, raw);
      if (!known) throw FieldError(qk, "unknown key");
      apply_ppo_key(cfg.antagonist, key, raw);
      apply_ppo_key(cfg.teacher, key, raw);
    }
  }
  if (student_entropy) cfg.protagonist.entropy_coef = cfg.antagonist.entropy_coef = *student_entropy;
  if (generator_entropy) cfg.teacher.entropy_coef = *generator_entropy;

  for (auto [name, role] : {std::pair{"protagonist", &cfg.protagonist},
                            std::pair{"antagonist", &cfg.antagonist},
                            std::pair{"teacher", &cfg.teacher}}) {
    for (const auto& [key, node] : section(name)) {
      if (!apply_ppo_key(*role, key, node.get_value<std::string>())) {
        throw FieldError(std::string(name) + "." + key, "unknown key");
      }
    }
  }

  for (const auto& [key, node] : section("bc")) {
    const auto raw = node.get_value<std::string>();
    const std::string qk = "bc." + key;
    if (key == "kl_loss_coefficient") cfg.distill.kl_coef = convert<double>(qk, raw);
    else if (key == "kl_loss_interval") cfg.distill.kl_interval = convert<int>(qk, raw);
    else if (key == "kl_loss_direction") cfg.distill.direction = learn::parse_distill_direction(raw);
    else throw FieldError(qk, "unknown key");
  }

  for (const auto& [key, node] : section("buffer")) {
    const auto raw = node.get_value<std::string>();
    const std::string qk = "buffer." + key;
    if (key == "replay_rate") cfg.buffer.replay_rate = convert<double>(qk, raw);
    else if (key == "buffer_size") cfg.buffer.capacity = convert<int>(qk, raw);
    else if (key == "temperature") cfg.buffer.temperature = convert<double>(qk, raw);
    else if (key == "staleness_coefficient") cfg.buffer.staleness_coef = convert<double>(qk, raw);
    else throw FieldError(qk, "unknown key");
  }

  auto qualified = [](const char* section, auto&& check) {
    try {
      check();
    } catch (const FieldError& e) {
      const std::string what = e.what();
      throw FieldError(std::string(section) + "." + e.field(), what.substr(e.field().size() + 2));
    }
  };
  qualified("protagonist", [&] { cfg.protagonist.validate(); });
  if (uses_antagonist(cfg.algorithm)) qualified("antagonist", [&] { cfg.antagonist.validate(); });
  if (uses_teacher(cfg.algorithm)) qualified("teacher", [&] { cfg.teacher.validate(); });
  qualified("bc", [&] { cfg.distill.validate(); });
  if (uses_buffer(cfg.algorithm) || tree.count("buffer")) {
    qualified("buffer", [&] { cfg.buffer.validate(); });
  }
  qualified("run", [&] { cfg.validate(); });
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[run]\n"
      << "algorithm = " << to_string(cfg.algorithm) << "\n"
      << "seed = " << cfg.seed << "\n"
      << "iterations = " << cfg.iterations << "\n"
      << "grid_size = " << cfg.grid_size << "\n"
      << "budget = " << budget_text(cfg.budget) << "\n"
      << "max_steps = " << cfg.max_steps << "\n"
      << "eval_episodes = " << cfg.eval_episodes << "\n"
      << "hidden = " << cfg.hidden << "\n"
      << "log_interval = " << cfg.log_interval << "\n"
      << "n_edits = " << cfg.n_edits << "\n";
  if (!cfg.eval_suite.empty()) out << "eval_suite = " << cfg.eval_suite << "\n";
  out << "eval_suite_episodes = " << cfg.eval_suite_episodes << "\n"
      << "record_wallclock = " << (cfg.record_wallclock ? "true" : "false") << "\n";
  out << "\n[protagonist]\n";
  write_ppo(out, cfg.protagonist);
  out << "\n[antagonist]\n";
  write_ppo(out, cfg.antagonist);
  out << "\n[teacher]\n";
  write_ppo(out, cfg.teacher);
  out << "\n[bc]\n"
      << "kl_loss_coefficient = " << fmt(cfg.distill.kl_coef) << "\n"
      << "kl_loss_interval = " << cfg.distill.kl_interval << "\n"
      << "kl_loss_direction = " << learn::to_string(cfg.distill.direction) << "\n";
  out << "\n[buffer]\n"
      << "replay_rate = " << fmt(cfg.buffer.replay_rate) << "\n"
      << "buffer_size = " << cfg.buffer.capacity << "\n"
      << "temperature = " << fmt(cfg.buffer.temperature) << "\n"
      << "staleness_coefficient = " << fmt(cfg.buffer.staleness_coef) << "\n";
  return out.str();
}

}  // namespace ued::algos
