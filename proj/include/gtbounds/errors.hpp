#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gtbounds {

/// Argument outside its legal range (noise parameter, ν, η, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the domain an operation is defined on (k = 0, v > k, infeasible pmf spec).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A reference distribution assigns zero mass where the channel can emit.
class AbsoluteContinuityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested computation is too large for exhaustive evaluation.
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gtbounds
