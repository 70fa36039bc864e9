#pragma once

#include <stdexcept>
#include <string>

namespace kgqg {

// Base for everything the harness throws on bad input or bad state.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Validation failures (CLI exit code 1).
struct ValidationError : Error {
  using Error::Error;
};

// Filesystem / stream failures (CLI exit code 2).
struct IoError : Error {
  using Error::Error;
};

// A line of an input file that does not match its schema.
struct MalformedRecord : ValidationError {
  MalformedRecord(const std::string& file, std::size_t line, const std::string& reason)
      : ValidationError(file + ":" + std::to_string(line) + ": " + reason),
        line_number(line) {}
  std::size_t line_number;
};

struct MalformedDialog : ValidationError {
  MalformedDialog(const std::string& dialog_id, const std::string& reason)
      : ValidationError("dialog '" + dialog_id + "': " + reason) {}
};

struct LengthViolation : ValidationError {
  using ValidationError::ValidationError;
};

struct EmptyOutput : ValidationError {
  using ValidationError::ValidationError;
};

struct EmptyReferenceSet : ValidationError {
  using ValidationError::ValidationError;
};

struct MissingVerbalization : ValidationError {
  using ValidationError::ValidationError;
};

struct NoReferent : ValidationError {
  using ValidationError::ValidationError;
};

struct InsufficientOverlap : ValidationError {
  using ValidationError::ValidationError;
};

struct DegenerateSample : ValidationError {
  using ValidationError::ValidationError;
};

}  // namespace kgqg
