#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ued {

// FNV-1a over the bytes followed by a splitmix64 finaliser.
std::uint64_t stable_hash(std::string_view bytes);

// The free parameters of one level: an environment-owned integer vector plus
// the id of the environment that knows how to interpret it.
struct LevelParams {
  std::string env_id;
  std::vector<std::int64_t> theta;

  std::string canonical() const;
  std::uint64_t hash() const { return stable_hash(canonical()); }

  friend bool operator==(const LevelParams&, const LevelParams&) = default;
};

std::string hash_hex(std::uint64_t hash);

}  // namespace ued
