#include "ued/core/pomdp.hpp"

#include "ued/core/errors.hpp"

namespace ued {

void EnvRegistry::add(std::string env_id, PomdpFactory factory) {
  factories_[std::move(env_id)] = std::move(factory);
}

bool EnvRegistry::contains(const std::string& env_id) const {
  return factories_.count(env_id) != 0;
}

std::unique_ptr<Pomdp> EnvRegistry::instantiate(const LevelParams& level,
                                                std::uint64_t seed) const {
  auto it = factories_.find(level.env_id);
  if (it == factories_.end()) {
    throw FieldError("env_id", "unknown environment '" + level.env_id + "'");
  }
  return it->second(level, seed);
}

}  // namespace ued
