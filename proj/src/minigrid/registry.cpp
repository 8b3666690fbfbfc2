#include "ued/core/pomdp.hpp"
#include "ued/minigrid/student_env.hpp"

namespace ued {

const EnvRegistry& builtin_registry() {
  static const EnvRegistry registry = [] {
    EnvRegistry r;
    minigrid::register_environment(r);
    return r;
  }();
  return registry;
}

}  // namespace ued
