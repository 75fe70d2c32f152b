#include "bipart/error.hpp"

namespace bipart {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSize: return "invalid-size";
    case ErrorCode::InvalidBsAttachment: return "invalid-bs-attachment";
    case ErrorCode::InvalidIndex: return "invalid-index";
    case ErrorCode::InvalidGraph: return "invalid-graph";
    case ErrorCode::NotAnEdge: return "not-an-edge";
    case ErrorCode::InvalidModulus: return "invalid-modulus";
    case ErrorCode::NotSupported: return "not-supported";
    case ErrorCode::IllegalInteraction: return "illegal-interaction";
    case ErrorCode::CorruptConfiguration: return "corrupt-configuration";
    case ErrorCode::ScheduleExhausted: return "schedule-exhausted";
    case ErrorCode::StateSpaceTooLarge: return "state-space-too-large";
    case ErrorCode::InapplicablePredicate: return "inapplicable-predicate";
    case ErrorCode::IncompatibleTrace: return "incompatible-trace";
    case ErrorCode::Parse: return "parse-error";
  }
  return "unknown";
}

}  // namespace bipart
