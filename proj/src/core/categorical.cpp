#include "ued/core/categorical.hpp"

#include <algorithm>
#include <cmath>

namespace ued {

std::vector<double> log_softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double m = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double z : out) sum += std::exp(z - m);
  const double lse = m + std::log(sum);
  for (double& z : out) z -= lse;
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  auto out = log_softmax(logits);
  for (double& z : out) z = std::exp(z);
  return out;
}

}  // namespace ued
