#pragma once

#include <stdexcept>
#include <string>

namespace mink {

/// Precondition violated by an argument (non-positive exponent, singular map, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A gradient that does not belong to any boundary point of the body.
class InconsistentGradient : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Hull input with no two-dimensional extent.
class DegenerateHull : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Collision query whose geometry has no defined center ray.
class DegenerateQuery : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed body/scene description; the message names the offending field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mink
