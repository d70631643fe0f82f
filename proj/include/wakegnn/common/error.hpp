#pragma once

#include <stdexcept>
#include <string>

namespace wakegnn {

/// Error categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  Usage = 1,
  Config = 2,
  Data = 3,
  Numerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

/// Invalid physical or model parameters (e.g. wake constants that leave the root negative).
class ParameterError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Shape disagreement between tensors, layers, graphs or configs.
class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Mesh spacing would produce more vertices than the configured budget.
class BudgetExceededError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

/// Graph connectivity references vertices that do not exist.
class StructuralError : public DataError {
 public:
  using DataError::DataError;
};

/// Query point lies outside the region covered by a field.
class DomainError : public DataError {
 public:
  using DataError::DataError;
};

enum class FormatErrorKind { BadMagic, BadVersion, Truncated, Malformed };

/// Binary file could not be decoded. `block()` names the section that failed.
class FormatError : public DataError {
 public:
  FormatError(FormatErrorKind kind, std::string block, const std::string& what)
      : DataError(what), format_kind_(kind), block_(std::move(block)) {}
  FormatErrorKind format_kind() const noexcept { return format_kind_; }
  const std::string& block() const noexcept { return block_; }

 private:
  FormatErrorKind format_kind_;
  std::string block_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

}  // namespace wakegnn
