#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ued/core/level_params.hpp"

namespace ued {

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool terminated = false;  // reached an absorbing state
  bool truncated = false;   // hit the environment's own step limit
};

// A fully specified (theta fixed) partially observed decision process.
class Pomdp {
 public:
  virtual ~Pomdp() = default;

  virtual std::vector<double> reset() = 0;
  virtual StepResult step(int action) = 0;
  virtual std::vector<double> observe() const = 0;

  virtual int observation_size() const = 0;
  virtual int action_count() const = 0;
};

struct PolicyOutput {
  std::vector<double> logits;
  double value = 0.0;
};

// Memoryless stochastic policy over observations, with a value estimate.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyOutput evaluate(std::span<const double> observation) const = 0;
};

using PomdpFactory =
    std::function<std::unique_ptr<Pomdp>(const LevelParams&, std::uint64_t seed)>;

class EnvRegistry {
 public:
  void add(std::string env_id, PomdpFactory factory);
  bool contains(const std::string& env_id) const;

  // Throws FieldError("env_id") for unknown environments; factories reject
  // malformed theta with the offending field.
  std::unique_ptr<Pomdp> instantiate(const LevelParams& level, std::uint64_t seed) const;

 private:
  std::map<std::string, PomdpFactory> factories_;
};

// Registry with every environment shipped in this library.
const EnvRegistry& builtin_registry();

inline std::unique_ptr<Pomdp> instantiate(const LevelParams& level, std::uint64_t seed) {
  return builtin_registry().instantiate(level, seed);
}

}  // namespace ued
