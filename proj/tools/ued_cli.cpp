#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "plot.hpp"
#include "ued/algos/config.hpp"
#include "ued/algos/metrics_row.hpp"
#include "ued/algos/trainer.hpp"
#include "ued/core/level_params.hpp"
#include "ued/eval/metrics.hpp"
#include "ued/minigrid/complexity.hpp"
#include "ued/minigrid/level_io.hpp"
#include "ued/minigrid/suites.hpp"

namespace fs = std::filesystem;
using namespace ued;

namespace {

struct TrainArgs {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string resume;
  int checkpoint_every = 0;
};

int train(const TrainArgs& args) {
  algos::RunConfig cfg = algos::load_config(args.config);
  if (args.seed_set) cfg.seed = args.seed;
  fs::create_directories(args.out);
  const fs::path metrics = fs::path(args.out) / "metrics.csv";
  const fs::path checkpoint = fs::path(args.out) / "checkpoint.json";

  auto trainer = args.resume.empty() ? algos::Trainer(cfg)
                                     : algos::Trainer::load_checkpoint(args.resume);
  std::ofstream csv;
  if (args.resume.empty()) {
    csv.open(metrics, std::ios::binary | std::ios::trunc);
    csv << algos::metrics_header() << '\n';
    std::ofstream(fs::path(args.out) / "config.ini", std::ios::binary)
        << algos::to_config_text(cfg);
  } else {
    csv.open(metrics, std::ios::binary | std::ios::app);
  }
  if (!csv) throw std::runtime_error("cannot write " + metrics.string());

  // A resumed run continues to the iteration count of --config.
  const std::int64_t total = cfg.iterations;
  const int every = args.checkpoint_every > 0 ? args.checkpoint_every : static_cast<int>(total);
  while (trainer.iteration() < total) {
    const std::int64_t next = std::min<std::int64_t>(total, trainer.iteration() + every);
    trainer.run_until(next, &csv);
    trainer.save_checkpoint(checkpoint);
  }
  if (total == 0) trainer.save_checkpoint(checkpoint);
  std::cout << "trained " << algos::to_string(trainer.config().algorithm) << " for "
            << trainer.iteration() << " iterations, " << trainer.env_steps()
            << " env steps; metrics in " << metrics.string() << '\n';
  return 0;
}

int evaluate(const std::string& checkpoint, const std::string& suite_path, int episodes,
             int seeds, const std::string& out) {
  const auto trainer = algos::Trainer::load_checkpoint(checkpoint);
  auto suite = eval::load_suite(suite_path);
  if (suite.levels.empty()) throw std::runtime_error("suite " + suite_path + " has no levels");
  suite.episodes = episodes;
  Rng rng = make_rng(trainer.config().seed, {0xE7A1});
  const auto result = eval::solved_rate(trainer.protagonist().policy, suite, seeds, rng,
                                        trainer.config().max_steps);
  std::ofstream csv(out, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + out);
  csv << "level,solved_rate_mean,solved_rate_sd\n";
  for (std::size_t i = 0; i < result.names.size(); ++i) {
    csv << result.names[i] << ',' << result.mean[i] << ',' << result.sd[i] << '\n';
  }
  std::cout << "mean solved rate " << result.overall();
  if (result.mean.size() >= 4) std::cout << ", IQM " << eval::iqm(result.mean);
  std::cout << ", optimality gap " << eval::optimality_gap(result.mean) << '\n';
  return 0;
}

int inspect(const std::string& path) {
  const auto level = minigrid::load_level(path);
  const int path_len = minigrid::shortest_path_len(level);
  std::cout << minigrid::render_ascii(level) << "size: " << level.width() << "x"
            << level.height() << "\n"
            << "hash: " << hash_hex(level.hash()) << "\n"
            << "blocks: " << minigrid::block_count(level) << "\n"
            << "shortest path length: " << path_len << "\n"
            << (minigrid::is_solvable(level) ? "solvable" : "unsolvable") << "\n";
  return 0;
}

int gen_suite(const std::string& kind, std::uint64_t seed, const std::string& out) {
  eval::EvalSuite suite;
  suite.levels = minigrid::generate_suite(kind, seed);
  eval::save_suite(out, suite);
  std::cout << "wrote " << suite.levels.size() << " levels to " << out << '\n';
  return 0;
}

int plot(const std::string& metrics, const std::string& out) {
  const auto rows = algos::read_metrics(metrics);
  if (fs::path(out).extension() == ".svg") {
    tools::write_svg(out, rows);
  } else if (fs::path(out).extension() == ".csv") {
    tools::write_long_csv(out, rows);
  } else {
    throw std::runtime_error("plot output must end in .svg or .csv");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised environment design lab for partially observed mazes"};
  app.require_subcommand(1);

  TrainArgs targs;
  auto* train_cmd = app.add_subcommand("train", "Run a training loop from a config file");
  train_cmd->add_option("--config", targs.config, "Config file")->required();
  auto* seed_opt = train_cmd->add_option("--seed", targs.seed, "Overrides the config seed");
  train_cmd->add_option("--out", targs.out, "Output directory")->required();
  train_cmd->add_option("--resume", targs.resume, "Checkpoint to resume from");
  train_cmd->add_option("--checkpoint-every", targs.checkpoint_every,
                        "Save a checkpoint every N iterations");

  std::string checkpoint, suite, eval_out;
  int episodes = 100, seeds = 1;
  auto* eval_cmd = app.add_subcommand("eval", "Zero-shot solved rate of a trained protagonist");
  eval_cmd->add_option("--checkpoint", checkpoint)->required();
  eval_cmd->add_option("--suite", suite, "Suite directory or manifest")->required();
  eval_cmd->add_option("--episodes", episodes)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seeds", seeds)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", eval_out)->required();

  std::string level_path;
  auto* inspect_cmd = app.add_subcommand("inspect-level", "Render a level and its complexity");
  inspect_cmd->add_option("file", level_path)->required();

  std::string kind, suite_out;
  std::uint64_t suite_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen-suite", "Write a procedural evaluation suite");
  gen_cmd->add_option("--kind", kind)->required();
  gen_cmd->add_option("--seed", suite_seed);
  gen_cmd->add_option("--out", suite_out)->required();

  std::string metrics, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Chart a metrics CSV as SVG or long-format CSV");
  plot_cmd->add_option("--metrics", metrics)->required();
  plot_cmd->add_option("--out", plot_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*train_cmd) {
      targs.seed_set = seed_opt->count() > 0;
      return train(targs);
    }
    if (*eval_cmd) return evaluate(checkpoint, suite, episodes, seeds, eval_out);
    if (*inspect_cmd) return inspect(level_path);
    if (*gen_cmd) return gen_suite(kind, suite_seed, suite_out);
    if (*plot_cmd) return plot(metrics, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
