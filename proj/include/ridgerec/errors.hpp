#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ridgerec {

/// Violated precondition on caller-supplied arguments.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A query point fell outside the oracle's declared domain.
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// The recovered direction estimate vanished, so it cannot be normalized.
/// Typically signals g'(anchor) close to zero or an over-regularized solve.
class DegenerateRecovery : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A convex solve did not reach its tolerance.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ridgerec
