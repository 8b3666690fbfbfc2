#include "ued/oracle/oracle.hpp"

#include <cmath>
#include <deque>
#include <memory>

#include "ued/core/categorical.hpp"

namespace ued::oracle {

namespace {

constexpr int kLeft = 0;
constexpr int kRight = 1;
constexpr int kForward = 2;
constexpr int kRowStep[4] = {0, 1, 0, -1};  // right, down, left, up
constexpr int kColStep[4] = {1, 0, -1, 0};

struct StateSpace {
  const MazeLevel& level;
  int width;

  int index(Cell c, int dir) const { return (c.row * width + c.col) * 4 + dir; }
  int count() const { return level.width() * level.height() * 4; }
  Cell cell_of(int s) const { return {(s / 4) / width, (s / 4) % width}; }
  int dir_of(int s) const { return s % 4; }

  int successor(int s, int action) const {
    const Cell c = cell_of(s);
    const int d = dir_of(s);
    if (action == kLeft) return index(c, (d + 3) % 4);
    if (action == kRight) return index(c, (d + 1) % 4);
    const Cell n{c.row + kRowStep[d], c.col + kColStep[d]};
    return level.is_wall(n) ? s : index(n, d);
  }
  bool at_goal(int s) const { return cell_of(s) == level.goal_pos(); }
  bool open(int s) const { return !level.is_wall(cell_of(s)); }
};

ActionProbs to_probs(const std::vector<double>& logits) {
  const auto p = softmax(logits);
  return {p.at(0), p.at(1), p.at(2)};
}

// Backward induction; `reward_at(step)` is paid on entering the goal at the
// given 1-based step.
template <typename Reward>
double finite_horizon_value(const MazeLevel& level, const StatePolicy& policy, int max_steps,
                            OracleLimits limits, Reward reward_at) {
  level.validate();
  const StateSpace space{level, level.width()};
  const int n = space.count();
  if (static_cast<std::int64_t>(n) * max_steps > limits.max_work) {
    throw StateBudgetExceeded("oracle: state space x horizon exceeds the work budget");
  }
  std::vector<ActionProbs> probs(n);
  std::vector<std::array<int, 3>> next(n);
  for (int s = 0; s < n; ++s) {
    if (!space.open(s) || space.at_goal(s)) continue;
    probs[s] = policy(space.cell_of(s), static_cast<Direction>(space.dir_of(s)));
    for (int a = 0; a < 3; ++a) next[s][a] = space.successor(s, a);
  }
  std::vector<double> later(n, 0.0), now(n, 0.0);
  for (int t = max_steps - 1; t >= 0; --t) {
    const double r = reward_at(t + 1);
    for (int s = 0; s < n; ++s) {
      if (!space.open(s) || space.at_goal(s)) continue;
      double v = 0.0;
      for (int a = 0; a < 3; ++a) {
        const int sn = next[s][a];
        v += probs[s][a] * (space.at_goal(sn) ? r : later[sn]);
      }
      now[s] = v;
    }
    std::swap(now, later);
  }
  return later[space.index(level.agent_pos(), static_cast<int>(level.agent_dir()))];
}

}  // namespace

StatePolicy uniform_policy() {
  return [](Cell, Direction) { return ActionProbs{1.0 / 3, 1.0 / 3, 1.0 / 3}; };
}

StatePolicy observation_policy(const Policy& policy, const MazeLevel& level) {
  return [&policy, level](Cell c, Direction d) {
    const auto obs = minigrid::encode_observation(level, c, d);
    return to_probs(policy.evaluate(obs).logits);
  };
}

StatePolicy optimal_state_policy(const MazeLevel& level) {
  const StateSpace space{level, level.width()};
  const int n = space.count();
  // Reverse BFS: distance from each state to the goal.
  auto dist = std::make_shared<std::vector<int>>(n, -1);
  std::vector<std::vector<int>> preds(n);
  for (int s = 0; s < n; ++s) {
    if (!space.open(s) || space.at_goal(s)) continue;
    for (int a = 0; a < 3; ++a) {
      const int sn = space.successor(s, a);
      if (sn != s) preds[sn].push_back(s);
    }
  }
  std::deque<int> frontier;
  for (int d = 0; d < 4; ++d) {
    const int g = space.index(level.goal_pos(), d);
    (*dist)[g] = 0;
    frontier.push_back(g);
  }
  while (!frontier.empty()) {
    const int s = frontier.front();
    frontier.pop_front();
    for (int p : preds[s]) {
      if ((*dist)[p] >= 0) continue;
      (*dist)[p] = (*dist)[s] + 1;
      frontier.push_back(p);
    }
  }
  const int width = level.width();
  const auto copy = std::make_shared<MazeLevel>(level);
  return [dist, width, copy](Cell c, Direction d) {
    const StateSpace sp{*copy, width};
    const int s = sp.index(c, static_cast<int>(d));
    int best = kForward;
    int best_dist = -1;
    for (int a : {kForward, kLeft, kRight}) {
      const int sn = sp.successor(s, a);
      const int dn = (*dist)[sn];
      if (dn < 0 || sn == s) continue;
      if (best_dist < 0 || dn < best_dist) {
        best = a;
        best_dist = dn;
      }
    }
    ActionProbs p{0.0, 0.0, 0.0};
    p[best] = 1.0;
    return p;
  };
}

int optimal_steps(const MazeLevel& level) {
  level.validate();
  const StateSpace space{level, level.width()};
  std::vector<int> dist(space.count(), -1);
  const int start = space.index(level.agent_pos(), static_cast<int>(level.agent_dir()));
  dist[start] = 0;
  std::deque<int> frontier{start};
  while (!frontier.empty()) {
    const int s = frontier.front();
    frontier.pop_front();
    for (int a = 0; a < 3; ++a) {
      const int sn = space.successor(s, a);
      if (dist[sn] >= 0) continue;
      dist[sn] = dist[s] + 1;
      if (space.at_goal(sn)) return dist[sn];
      frontier.push_back(sn);
    }
  }
  return -1;
}

double optimal_return(const MazeLevel& level, int max_steps) {
  const int t = optimal_steps(level);
  if (t < 0 || t > max_steps) return 0.0;
  return 1.0 - static_cast<double>(t) / static_cast<double>(max_steps);
}

double exact_policy_value(const MazeLevel& level, const StatePolicy& policy, int max_steps,
                          OracleLimits limits) {
  return finite_horizon_value(level, policy, max_steps, limits, [max_steps](int step) {
    return 1.0 - static_cast<double>(step) / static_cast<double>(max_steps);
  });
}

double exact_success_probability(const MazeLevel& level, const StatePolicy& policy, int max_steps,
                                 OracleLimits limits) {
  return finite_horizon_value(level, policy, max_steps, limits, [](int) { return 1.0; });
}

std::vector<double> brute_force_advantages(std::span<const double> rewards,
                                           std::span<const double> values, bool terminal,
                                           double gamma, double lambda) {
  const std::size_t n = rewards.size();
  std::vector<double> adv(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = t; k < n; ++k) {
      const double bootstrap = (terminal && k + 1 == n) ? 0.0 : values[k + 1];
      const double delta = rewards[k] + gamma * bootstrap - values[k];
      adv[t] += std::pow(gamma * lambda, static_cast<double>(k - t)) * delta;
    }
  }
  return adv;
}

double brute_force_pvl(std::span<const double> deltas, double gamma, double lambda) {
  const std::size_t n = deltas.size();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double inner = 0.0;
    for (std::size_t k = t; k < n; ++k) {
      inner += std::pow(gamma * lambda, static_cast<double>(k - t)) * deltas[k];
    }
    total += std::max(inner, 0.0);
  }
  return total / static_cast<double>(n);
}

double brute_force_pvl(const Trajectory& traj, double gamma, double lambda) {
  const std::size_t n = traj.length();
  std::vector<double> deltas(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double bootstrap = (traj.done && k + 1 == n) ? 0.0 : traj.values[k + 1];
    deltas[k] = traj.rewards[k] + gamma * bootstrap - traj.values[k];
  }
  return brute_force_pvl(deltas, gamma, lambda);
}

OracleGuidedPolicy::OracleGuidedPolicy(const minigrid::MazeEnv& env)
    : env_(env), table_(optimal_state_policy(env.level())) {}

PolicyOutput OracleGuidedPolicy::evaluate(std::span<const double>) const {
  const auto p = table_(env_.state().pos, env_.state().dir);
  PolicyOutput out;
  out.logits.resize(3);
  for (int a = 0; a < 3; ++a) out.logits[a] = p[a] > 0.5 ? 0.0 : -1e9;
  return out;
}

}  // namespace ued::oracle
