#pragma once

#include <stdexcept>
#include <string>

namespace fsoqkd {

/// Invalid argument or configuration value (precondition violation).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A quadrature or iterative scheme did not reach its tolerance within budget.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical result violates a physical invariant (e.g. a complex residue in
/// a quantity that must be real).
class InvariantViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

} // namespace fsoqkd
