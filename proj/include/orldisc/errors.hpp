#pragma once

#include <stdexcept>

namespace orldisc {

/// Problem size exceeds the documented limit of an exact engine.
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure (bracketing, root finding) failed outright.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orldisc
