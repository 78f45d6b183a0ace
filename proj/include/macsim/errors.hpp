#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace macsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (e.g. a probability > 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Estimated or supplied field probabilities that the chain cannot use.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

class BlockingError : public Error {
 public:
  using Error::Error;
};

// Sample file with the wrong magic bytes, version, or header contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Sample file cut short inside a frame.
class CorruptionError : public Error {
 public:
  CorruptionError(std::int64_t frame, const std::string& what);
  std::int64_t frame() const noexcept { return frame_; }

 private:
  std::int64_t frame_;
};

}  // namespace macsim
