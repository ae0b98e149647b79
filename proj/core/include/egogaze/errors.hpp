#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace egogaze {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frame or grid dimensions that cannot be tiled.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Frame does not match the geometry or is internally inconsistent.
class FrameError : public Error {
 public:
  using Error::Error;
};

class MissingFlowError : public Error {
 public:
  using Error::Error;
};

/// Feature vectors of different lengths were compared.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside its valid range, bad flag, or malformed config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input table; carries the 1-based line number of the offending row.
class SchemaError : public ConfigError {
 public:
  SchemaError(const std::string& what, std::size_t line)
      : ConfigError(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Streaming contract violated (out-of-order frames, geometry drift).
class PipelineError : public Error {
 public:
  using Error::Error;
};

class EmptyEvaluationError : public Error {
 public:
  using Error::Error;
};

/// File system or decode failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace egogaze
