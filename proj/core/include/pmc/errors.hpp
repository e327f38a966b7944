#pragma once

#include <stdexcept>
#include <string>

namespace pmc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the admissible parameter region.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A request that only makes sense in the other bifurcation regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Root bracket without a sign change.
class BadBracket : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of budget before meeting its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A user function returned NaN or infinity where a finite value was required.
class NonFinite : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pmc
