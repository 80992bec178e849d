#pragma once

#include <stdexcept>
#include <string>

namespace qdiff {

// Bad input: violated precondition on a parameter or field.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values or a numerical procedure that failed to converge.
class NumericFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qdiff
