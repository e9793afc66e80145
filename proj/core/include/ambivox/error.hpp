#pragma once

#include <stdexcept>
#include <string>

namespace ambivox {

/// Base class for every data error raised by the toolkit. The CLI maps
/// anything derived from it to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported input (WAV encoding, CSV content, markup).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An operation that needs signal energy was handed digital silence.
class SilentClipError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on the arguments does not hold.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace ambivox
