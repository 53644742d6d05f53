#pragma once

#include <stdexcept>
#include <string>

namespace chameleon {

/// Bad input: a precondition on an argument or configuration value failed.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure (bracketing, root solve, relaxation) did not succeed.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested observable is outside the regime where the model applies.
class OutOfValidity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace detail
}  // namespace chameleon
