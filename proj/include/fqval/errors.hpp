#pragma once

#include <stdexcept>
#include <string>

namespace fqval {

/// Raised when an input violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The `b` quantity of a certificate vanishes, so the size inequality has
/// no meaning.
class DegenerateB : public DomainError {
 public:
  DegenerateB() : DomainError("degenerate b: (R-1)*b2 + (S-1)*b1 is zero") {}
};

/// An enumeration or evaluation would exceed its desk-scale budget.
class CapExceeded : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace fqval
