#pragma once

#include <stdexcept>
#include <string>

namespace zpell {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A perfect square was supplied where a Pell discriminant is required.
class SquareDiscriminant : public DomainError {
 public:
  using DomainError::DomainError;
};

// theta_density found no quotient string in the dyadic window.
class EmptySupport : public DomainError {
 public:
  using DomainError::DomainError;
};

// A cache file exists but its magic, length or payload is inconsistent.
class CacheCorrupt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zpell
