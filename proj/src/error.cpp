#include "caflow/error.hpp"

#include <sstream>

namespace caflow {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotStarShaped: return "NotStarShaped";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::NonConstantSign: return "NonConstantSign";
    case ErrorKind::StabilityViolation: return "StabilityViolation";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::InsufficientStride: return "InsufficientStride";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

namespace {
std::string with_time(double time, const std::string& message) {
  std::ostringstream os;
  os.precision(17);
  os << message << " (at t=" << time << ")";
  return os.str();
}
}  // namespace

FlowError::FlowError(ErrorKind kind, double time, const std::string& message)
    : Error(kind, with_time(time, message)), time_(time) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace caflow
