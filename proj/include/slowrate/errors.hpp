#ifndef SLOWRATE_ERRORS_HPP
#define SLOWRATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slowrate {

// Base for every error raised by the library. The CLI maps UsageError to
// exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nonfinite or otherwise malformed numeric input.
class InputError : public Error {
 public:
  using Error::Error;
};

// Point outside the effective domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Catalog or algorithm parameter out of its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A sequence handed to an analysis routine violates its precondition
// (too short, not monotone, wrong algorithm tag, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An iterate history that contradicts a proven structural property.
class TraceIntegrityError : public Error {
 public:
  using Error::Error;
};

// Should be unreachable for catalog inputs; signals a numerical bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace slowrate

#endif  // SLOWRATE_ERRORS_HPP
