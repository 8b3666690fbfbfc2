#pragma once

#include <span>
#include <vector>

namespace ued {

// Numerically stable log-softmax (max-shifted).
std::vector<double> log_softmax(std::span<const double> logits);
std::vector<double> softmax(std::span<const double> logits);

}  // namespace ued
