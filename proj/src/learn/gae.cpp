#include "ued/learn/gae.hpp"

#include <stdexcept>

namespace ued::learn {

std::vector<double> td_residuals(std::span<const double> rewards, std::span<const double> values,
                                 bool terminal, double gamma) {
  if (values.size() != rewards.size() + 1) {
    throw std::invalid_argument("td_residuals: values must have length rewards + 1");
  }
  const std::size_t n = rewards.size();
  std::vector<double> delta(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double not_done = (terminal && t + 1 == n) ? 0.0 : 1.0;
    delta[t] = rewards[t] + gamma * values[t + 1] * not_done - values[t];
  }
  return delta;
}

GaeResult gae(std::span<const double> rewards, std::span<const double> values, bool terminal,
              double gamma, double lambda) {
  const auto delta = td_residuals(rewards, values, terminal, gamma);
  const std::size_t n = delta.size();
  GaeResult out;
  out.advantages.resize(n);
  out.returns.resize(n);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    running = delta[i] + gamma * lambda * running;
    out.advantages[i] = running;
    out.returns[i] = running + values[i];
  }
  return out;
}

}  // namespace ued::learn
