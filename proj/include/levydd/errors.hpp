#pragma once

#include <stdexcept>
#include <string>

namespace levydd {

// Precondition violation on an argument (non-finite input, out-of-range
// parameter, unsorted grid, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation requested at a pole or on a branch cut of an analytic function.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace levydd
