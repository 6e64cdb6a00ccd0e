#pragma once

#include <stdexcept>
#include <string>

namespace steiner {

/// Input outside the admissible domain of an operation (bad angle, y <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A state left the validity window [y_min, y_max] of the vector field.
class LeftDomainError : public DomainError {
 public:
  LeftDomainError(const std::string& what, double y) : DomainError(what), y_(y) {}
  double y() const noexcept { return y_; }

 private:
  double y_;
};

/// Root finder, quadrature or linear solve failed to deliver the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace steiner
