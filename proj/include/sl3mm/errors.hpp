#pragma once

#include <stdexcept>
#include <string>

namespace sl3mm {

// Errors caused by mathematically invalid requests (bad level, degenerate
// parameter, out-of-scope level). The CLI maps these to exit code 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LevelError : public DomainError {
 public:
  enum class Kind { Invalid, NonAdmissible, NotCoprime };
  LevelError(Kind kind, const std::string& what) : DomainError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class DegenerateParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Raised when modular data is requested at a level whose module characters
// are linearly dependent, so no S-matrix or Verlinde formula exists.
class LinearDependenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Label or expression text that does not parse.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A library invariant was violated (orbit cap exceeded, tail did not cancel...).
// The CLI maps these to exit code 3.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sl3mm
