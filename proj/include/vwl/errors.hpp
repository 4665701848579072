#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vwl {

/// Bad argument to an operation (dimension mismatch, out-of-range parameter).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A dilated mollifier does not fit in the box or is under-resolved by the grid.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition of an estimate does not hold (e.g. Q > nu*s).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite values appeared during time stepping.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(std::size_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace vwl
