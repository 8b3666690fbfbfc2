#pragma once

#include <stdexcept>
#include <string>

namespace ued {

// Rejection of a malformed input that names the offending field or key.
class FieldError : public std::invalid_argument {
 public:
  FieldError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ued
