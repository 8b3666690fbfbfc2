#include "ued/learn/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "ued/core/categorical.hpp"

namespace ued::learn {

double kl_divergence(std::span<const double> logits_p, std::span<const double> logits_q) {
  if (logits_p.size() != logits_q.size()) throw std::invalid_argument("kl_divergence: length mismatch");
  const auto lp = log_softmax(logits_p);
  const auto lq = log_softmax(logits_q);
  double kl = 0.0;
  for (std::size_t a = 0; a < lp.size(); ++a) kl += std::exp(lp[a]) * (lp[a] - lq[a]);
  return kl;
}

double policy_entropy(std::span<const double> logits) {
  const auto lp = log_softmax(logits);
  double h = 0.0;
  for (double l : lp) h -= std::exp(l) * l;
  return h;
}

}  // namespace ued::learn
