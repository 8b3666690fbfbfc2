#pragma once

#include <atomic>
#include <cstdint>

#include "ued/core/pomdp.hpp"
#include "ued/core/rng.hpp"
#include "ued/core/trajectory.hpp"

namespace ued {

class StepCounter {
 public:
  StepCounter() = default;
  StepCounter(const StepCounter& other) : count_(other.value()) {}
  StepCounter& operator=(const StepCounter& other) {
    count_.store(other.value(), std::memory_order_relaxed);
    return *this;
  }

  void add(std::uint64_t n) { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t value() const { return count_.load(std::memory_order_relaxed); }
  void reset() { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

// Plays one episode from reset. Stops on termination, on the environment's own
// truncation, or after max_steps; values.back() is 0 only for terminal stops.
Trajectory rollout(const Policy& policy, Pomdp& pomdp, int max_steps, Rng& rng,
                   StepCounter* counter = nullptr);

double undiscounted_return(const Trajectory& traj);

}  // namespace ued
