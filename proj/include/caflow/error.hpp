#pragma once

#include <stdexcept>
#include <string>

namespace caflow {

enum class ErrorKind {
  InvalidInput,
  NotStarShaped,
  DegenerateMetric,
  NonConstantSign,
  StabilityViolation,
  BlowUp,
  InsufficientStride,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// A step error annotated with the flow time at which it happened.
class FlowError : public Error {
 public:
  FlowError(ErrorKind kind, double time, const std::string& message);

  double time() const noexcept { return time_; }

 private:
  double time_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace caflow
