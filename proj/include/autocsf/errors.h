#pragma once

#include <stdexcept>
#include <string>

namespace autocsf {

// Base class for all library errors so callers can catch broadly.
class AutoCsfError : public std::runtime_error {
 public:
  explicit AutoCsfError(const std::string& message)
      : std::runtime_error(message) {}
};

// Invalid arguments or parameters outside their documented domain
// (alpha out of range, unsupported hash count, empty key set, ...).
class InvalidArgumentError : public AutoCsfError {
 public:
  explicit InvalidArgumentError(const std::string& message)
      : AutoCsfError(message) {}
};

// Malformed external input: k-mer tables, serialized containers.
class ParseError : public AutoCsfError {
 public:
  explicit ParseError(const std::string& message) : AutoCsfError(message) {}
};

// A GF(2) system (or a filter construction) could not be solved after
// exhausting the retry budget.
class UnsolvableSystemError : public AutoCsfError {
 public:
  explicit UnsolvableSystemError(const std::string& message)
      : AutoCsfError(message) {}
};

// A serialized blob fails structural validation (bad magic, truncation,
// out-of-range field).
class CorruptPayloadError : public ParseError {
 public:
  explicit CorruptPayloadError(const std::string& message)
      : ParseError(message) {}
};

}  // namespace autocsf
