#include "ued/learn/serialize.hpp"

#include <bit>
#include <cstdio>
#include <cstring>

#include "ued/core/errors.hpp"

namespace ued::learn {

namespace {

std::string hex_of(double x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(x)));
  return buf;
}

double double_of(std::string_view hex) {
  std::uint64_t bits = 0;
  for (char c : hex) {
    bits <<= 4;
    if (c >= '0' && c <= '9') bits |= static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f') bits |= static_cast<std::uint64_t>(c - 'a' + 10);
    else throw FieldError("parameters", "invalid hex digit");
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string encode_doubles(const Eigen::VectorXd& v) {
  std::string out;
  out.reserve(static_cast<std::size_t>(v.size()) * 16);
  for (Eigen::Index i = 0; i < v.size(); ++i) out += hex_of(v[i]);
  return out;
}

Eigen::VectorXd decode_doubles(const std::string& hex) {
  if (hex.size() % 16 != 0) throw FieldError("parameters", "hex payload length not a multiple of 16");
  Eigen::VectorXd v(static_cast<Eigen::Index>(hex.size() / 16));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = double_of(std::string_view(hex).substr(static_cast<std::size_t>(i) * 16, 16));
  }
  return v;
}

nlohmann::json to_json(const MlpPolicy& policy) {
  const auto& s = policy.shape();
  return {{"observation_size", s.observation_size},
          {"hidden", s.hidden},
          {"actions", s.actions},
          {"parameters", encode_doubles(policy.parameters())}};
}

MlpPolicy policy_from_json(const nlohmann::json& j) {
  MlpShape shape{j.at("observation_size").get<int>(), j.at("hidden").get<int>(),
                 j.at("actions").get<int>()};
  MlpPolicy policy(shape);
  Eigen::VectorXd p = decode_doubles(j.at("parameters").get<std::string>());
  if (p.size() != policy.parameters().size()) {
    throw FieldError("parameters", "size does not match the declared shape");
  }
  policy.parameters() = std::move(p);
  return policy;
}

nlohmann::json to_json(const AdamState& adam) {
  return {{"step", adam.step},
          {"first_moment", encode_doubles(adam.first_moment)},
          {"second_moment", encode_doubles(adam.second_moment)}};
}

AdamState adam_from_json(const nlohmann::json& j) {
  AdamState a;
  a.step = j.at("step").get<std::int64_t>();
  a.first_moment = decode_doubles(j.at("first_moment").get<std::string>());
  a.second_moment = decode_doubles(j.at("second_moment").get<std::string>());
  return a;
}

nlohmann::json to_json(const ReturnNormalizer& n) {
  Eigen::VectorXd v(2);
  v << n.mean, n.m2;
  return {{"count", n.count}, {"moments", encode_doubles(v)}};
}

ReturnNormalizer normalizer_from_json(const nlohmann::json& j) {
  ReturnNormalizer n;
  n.count = j.at("count").get<std::int64_t>();
  const auto v = decode_doubles(j.at("moments").get<std::string>());
  if (v.size() != 2) throw FieldError("moments", "expected two values");
  n.mean = v[0];
  n.m2 = v[1];
  return n;
}

}  // namespace ued::learn
