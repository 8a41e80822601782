#pragma once

#include <stdexcept>
#include <string>

namespace sigstate {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or contract violations caught before any work is done.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Mismatched tensor / matrix dimensions.
class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Malformed input file. Message carries file path and line number.
class ParseError : public Error {
 public:
  using Error::Error;
  ParseError(const std::string& path, long line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what) {}
};

/// Filesystem or stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint file is damaged or truncated.
class CorruptFileError : public IoError {
 public:
  using IoError::IoError;
};

/// Checkpoint was written by an incompatible format version.
class VersionMismatchError : public IoError {
 public:
  using IoError::IoError;
};

/// Training loss or parameters became non-finite.
class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

}  // namespace sigstate
