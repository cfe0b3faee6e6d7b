#pragma once

#include <stdexcept>
#include <string>

namespace collideq {

// Raised when a caller violates an operation's documented precondition.
class precondition_error : public std::invalid_argument {
 public:
  explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a scalar function is evaluated outside its domain.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw precondition_error(message);
}

}  // namespace collideq
