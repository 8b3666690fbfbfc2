#include "ued/core/level_params.hpp"

#include <cstdio>

namespace ued {

std::uint64_t stable_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

std::string LevelParams::canonical() const {
  std::string out = env_id;
  out += '|';
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(theta[i]);
  }
  return out;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace ued
