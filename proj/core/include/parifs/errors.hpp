#pragma once

#include <stdexcept>
#include <string>

namespace parifs {

// Exception hierarchy. The CLI maps each family to an exit code:
// InputError -> 2, VerificationFailure -> 3, PrecisionUndecidable -> 4.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input: bad branch, bad word, bad config field.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A point or parameter outside the domain of an operation (pole, x outside (0,1), tau at x <= e).
class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// An asserted invariant failed. Signals a construction bug or a violated hypothesis.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// An outward-interval comparison could not be decided before the precision cap.
class PrecisionUndecidable : public Error {
 public:
  using Error::Error;
};

}  // namespace parifs
