#ifndef BELLCHSH_ERRORS_HPP
#define BELLCHSH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bellchsh {

/// Operand dimensions or subsystem shapes do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter lies outside the domain of the requested construction.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical guard tripped: truncation tail too heavy, degenerate norm, ...
class NumericGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The unnormalized vector handed to a state constructor vanished.
class DegenerateStateError : public NumericGuardError {
 public:
  using NumericGuardError::NumericGuardError;
};

}  // namespace bellchsh

#endif  // BELLCHSH_ERRORS_HPP
