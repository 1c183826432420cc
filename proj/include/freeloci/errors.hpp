#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace freeloci {

/// Failure classes. The CLI maps each one to a process exit code.
enum class ErrorKind {
  invariant,     // internal self-check failed (exit 1)
  format,        // malformed text/JSON input (exit 2)
  precondition,  // well-formed input outside an operation's domain (exit 3)
  budget,        // randomized search ran out of retries (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), kind_(kind), name_(std::move(name)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorKind::format, "ParseError", what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::format, "FormatError", what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what, std::string name = "PreconditionError")
      : Error(ErrorKind::precondition, std::move(name), what) {}
};

class NotFullMatrixAlgebra : public PreconditionError {
 public:
  explicit NotFullMatrixAlgebra(const std::string& what)
      : PreconditionError(what, "NotFullMatrixAlgebra") {}
};

class NotRegularAtZero : public PreconditionError {
 public:
  explicit NotRegularAtZero(const std::string& what) : PreconditionError(what, "NotRegularAtZero") {}
};

class NotSameFunction : public PreconditionError {
 public:
  explicit NotSameFunction(const std::string& what) : PreconditionError(what, "NotSameFunction") {}
};

/// Randomized search exhausted its retry budget. Seed and budget are echoed so the
/// run can be reproduced or retried with a larger budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string name, const std::string& what, std::uint64_t seed, int budget)
      : Error(ErrorKind::budget, std::move(name),
              what + " (seed " + std::to_string(seed) + ", budget " + std::to_string(budget) + ")"),
        seed_(seed),
        budget_(budget) {}
  std::uint64_t seed() const noexcept { return seed_; }
  int budget() const noexcept { return budget_; }

 private:
  std::uint64_t seed_;
  int budget_;
};

class SplittingBudgetExceeded : public BudgetExceeded {
 public:
  SplittingBudgetExceeded(const std::string& what, std::uint64_t seed, int budget)
      : BudgetExceeded("SplittingBudgetExceeded", what, seed, budget) {}
};

class SearchBudgetExceeded : public BudgetExceeded {
 public:
  SearchBudgetExceeded(const std::string& what, std::uint64_t seed, int budget)
      : BudgetExceeded("SearchBudgetExceeded", what, seed, budget) {}
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what)
      : Error(ErrorKind::invariant, "InvariantViolation", what) {}
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw PreconditionError(what);
}

inline void ensure(bool condition, const std::string& what) {
  if (!condition) throw InvariantViolation(what);
}

}  // namespace freeloci
