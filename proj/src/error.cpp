#include "lanczos/error.hpp"

namespace lanczos {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NonFiniteSample: return "NonFiniteSample";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::NotNormalizable: return "NotNormalizable";
    case ErrorCode::EndpointViolation: return "EndpointViolation";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::UnknownKernel: return "UnknownKernel";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace lanczos
