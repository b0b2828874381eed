#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idgnn {

/// Malformed or out-of-contract input (bad ids, shapes, infeasible parameters).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A JSON/JSONL document could not be parsed. `line()` is 1-based, 0 if unknown.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A request exceeds a documented size or budget limit.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, integer overflow, or other numeric breakdown.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace idgnn
