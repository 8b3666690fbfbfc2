#include "ued/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ued/core/errors.hpp"
#include "ued/core/level_params.hpp"
#include "ued/core/rollout.hpp"
#include "ued/minigrid/level_io.hpp"

namespace ued::eval {

void EvalSuite::validate() const {
  if (episodes < 1) throw FieldError("episodes", "must be at least 1");
  std::set<std::string> seen;
  for (const auto& [name, level] : levels) {
    if (name.empty()) throw FieldError("name", "level names must be non-empty");
    if (!seen.insert(name).second) throw FieldError("name", "duplicate level name " + name);
    level.validate();
  }
}

void save_suite(const std::filesystem::path& dir, const EvalSuite& suite) {
  suite.validate();
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["version"] = 1;
  manifest["episodes"] = suite.episodes;
  manifest["levels"] = nlohmann::ordered_json::array();
  for (const auto& [name, level] : suite.levels) {
    const std::string file = name + ".json";
    minigrid::save_level(dir / file, level);
    manifest["levels"].push_back({{"name", name}, {"file", file}, {"hash", hash_hex(level.hash())}});
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

EvalSuite load_suite(const std::filesystem::path& path) {
  const auto manifest_path =
      std::filesystem::is_directory(path) ? path / "manifest.json" : path;
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read suite manifest " + manifest_path.string());
  const auto manifest = nlohmann::json::parse(in);
  const auto dir = manifest_path.parent_path();
  EvalSuite suite;
  suite.episodes = manifest.value("episodes", 100);
  for (const auto& entry : manifest.at("levels")) {
    minigrid::NamedLevel named{entry.at("name").get<std::string>(),
                               minigrid::load_level(dir / entry.at("file").get<std::string>())};
    if (entry.contains("hash") &&
        entry.at("hash").get<std::string>() != hash_hex(named.level.hash())) {
      throw FieldError("hash", "level " + named.name + " does not match its manifest hash");
    }
    suite.levels.push_back(std::move(named));
  }
  suite.validate();
  return suite;
}

double SolvedRate::overall() const { return eval::mean(mean); }

SolvedRate solved_rate(const Policy& policy, const EvalSuite& suite, int seeds, Rng& rng,
                       int max_steps) {
  if (suite.levels.empty()) throw std::invalid_argument("solved_rate: empty suite");
  if (seeds < 1) throw FieldError("seeds", "must be at least 1");
  const std::size_t n = suite.levels.size();
  SolvedRate out;
  for (const auto& l : suite.levels) out.names.push_back(l.name);
  out.per_seed.assign(static_cast<std::size_t>(seeds), std::vector<double>(n, 0.0));
  for (int s = 0; s < seeds; ++s) {
    Rng seed_rng(rng());
    for (std::size_t i = 0; i < n; ++i) {
      int solved = 0;
      for (int e = 0; e < suite.episodes; ++e) {
        minigrid::MazeEnv env(suite.levels[i].level, max_steps);
        if (rollout(policy, env, max_steps, seed_rng).done) ++solved;
      }
      out.per_seed[s][i] = static_cast<double>(solved) / suite.episodes;
    }
  }
  out.mean.assign(n, 0.0);
  out.sd.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) sum += out.per_seed[s][i];
    out.mean[i] = sum / seeds;
    if (seeds > 1) {
      double ss = 0.0;
      for (int s = 0; s < seeds; ++s) ss += std::pow(out.per_seed[s][i] - out.mean[i], 2);
      out.sd[i] = std::sqrt(ss / (seeds - 1));
    }
  }
  return out;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double iqm(std::span<const double> scores) {
  if (scores.size() < 4) throw std::invalid_argument("iqm needs at least 4 scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t trim = sorted.size() / 4;
  return mean(std::span<const double>(sorted).subspan(trim, sorted.size() - 2 * trim));
}

double optimality_gap(std::span<const double> scores, double ceiling) {
  if (scores.empty()) throw std::invalid_argument("optimality_gap of no scores");
  double total = 0.0;
  for (double s : scores) total += ceiling - std::min(s, ceiling);
  return total / static_cast<double>(scores.size());
}

std::pair<double, double> bootstrap_ci(std::span<const double> scores, const Statistic& statistic,
                                       Rng& rng, int n_resamples, double level) {
  if (scores.empty()) throw std::invalid_argument("bootstrap_ci of no scores");
  if (n_resamples < 1) throw FieldError("n_resamples", "must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw FieldError("level", "must lie in (0, 1)");
  const int n = static_cast<int>(scores.size());
  std::vector<double> stats(static_cast<std::size_t>(n_resamples));
  std::vector<double> resample(scores.size());
  for (auto& st : stats) {
    for (auto& x : resample) x = scores[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))];
    st = statistic(resample);
  }
  std::sort(stats.begin(), stats.end());
  auto quantile = [&stats](double q) {
    const double pos = q * static_cast<double>(stats.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, stats.size() - 1);
    return stats[lo] + (pos - static_cast<double>(lo)) * (stats[hi] - stats[lo]);
  };
  const double alpha = (1.0 - level) / 2.0;
  const double point = statistic(scores);
  return {std::min(quantile(alpha), point), std::max(quantile(1.0 - alpha), point)};
}

}  // namespace ued::eval
