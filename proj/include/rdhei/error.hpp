#pragma once

#include <stdexcept>
#include <string>

namespace rdhei {

// Base class for every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed image file. Carries the byte offset where decoding stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid sizes, block shapes, thresholds, ...
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Payload larger than the vacated room, or no room at all.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Carrier does not parse: wrong key, tampering or an unrelated image.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

// Entropy-coded stream is inconsistent with its model.
class StreamError : public CorruptionError {
 public:
  using CorruptionError::CorruptionError;
};

}  // namespace rdhei
