#pragma once

#include <span>
#include <vector>

namespace ued::learn {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// delta_t = r_t + gamma * v_{t+1} * (1 - terminal_t) - v_t, where only the last
// step can be terminal. values.size() must be rewards.size() + 1.
std::vector<double> td_residuals(std::span<const double> rewards, std::span<const double> values,
                                 bool terminal, double gamma);

// Backward recursion A_t = delta_t + gamma * lambda * A_{t+1}; returns = A + v.
GaeResult gae(std::span<const double> rewards, std::span<const double> values, bool terminal,
              double gamma, double lambda);

}  // namespace ued::learn
