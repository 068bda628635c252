#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gordian {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix dimensions do not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Invalid scalar argument (non-prime modulus, even determinant, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Text input did not match the expected grammar. `offset()` is the byte
/// offset of the offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Table content failed validation or cross-checks.
class DataError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed the configured group-order cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

/// An obstruction's hypothesis does not hold (e.g. non-coprime determinants).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A cooperative cancellation hook asked a long search to stop.
class CancelledError : public Error {
 public:
  using Error::Error;
};

}  // namespace gordian
