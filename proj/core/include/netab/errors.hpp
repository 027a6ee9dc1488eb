#pragma once

#include <stdexcept>
#include <string>

namespace netab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor dimensions disagree with what an operation requires.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid user input: bad flags, malformed files, out-of-range rates.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf reached a loss or gradient.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace netab
