#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lanczos {

enum class ErrorCode {
  InvalidArgument,
  NonConvergence,
  NonFiniteSample,
  OutOfRange,
  UnsupportedOrder,
  OrderMismatch,
  NotNormalizable,
  EndpointViolation,
  UnknownFunction,
  UnknownKernel,
  Overflow,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code distinguishes the cause.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lanczos
