#pragma once

#include <stdexcept>
#include <string>

namespace cdc {

// Invalid user-supplied parameters: sizes out of range, divisibility
// violations, points outside the nontrivial regime.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Internal inconsistency in a constructed scheme (missing IV, missing signal,
// unrecoverable sub-block). Indicates a bug, not bad input.
class SchemeError : public std::logic_error {
 public:
  explicit SchemeError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace cdc
