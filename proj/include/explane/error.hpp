#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace explane {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed PDDL input. Carries the 1-based position of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that violates a model invariant (undeclared predicate, bad edit, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// No plausible plan exists from the requested state.
class UnsolvableError : public Error {
 public:
  using Error::Error;
};

/// A plan step whose preconditions do not hold. `step()` is the 0-based index.
class InapplicableActionError : public Error {
 public:
  InapplicableActionError(const std::string& action, std::size_t step)
      : Error("action (" + action + ") is not applicable at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// The available options cannot explain the divergence between two mindsets.
class IrreconcilableError : public Error {
 public:
  using Error::Error;
};

}  // namespace explane
