#pragma once

#include <nlohmann/json.hpp>

#include "ued/learn/mlp.hpp"
#include "ued/learn/ppo.hpp"

namespace ued::learn {

// Doubles are stored as 16-hex-digit IEEE-754 bit patterns so that a load
// restores every value bit for bit.
std::string encode_doubles(const Eigen::VectorXd& v);
Eigen::VectorXd decode_doubles(const std::string& hex);

nlohmann::json to_json(const MlpPolicy& policy);
MlpPolicy policy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AdamState& adam);
AdamState adam_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ReturnNormalizer& n);
ReturnNormalizer normalizer_from_json(const nlohmann::json& j);

}  // namespace ued::learn
