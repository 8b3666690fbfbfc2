#pragma once

#include <span>

namespace ued::learn {

// KL(p || q) for categorical distributions given as logits, in log space.
double kl_divergence(std::span<const double> logits_p, std::span<const double> logits_q);

double policy_entropy(std::span<const double> logits);

}  // namespace ued::learn
