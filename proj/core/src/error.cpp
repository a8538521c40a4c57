#include "frechet/error.hpp"

namespace frechet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kStructural: return "structural error";
    case ErrorKind::kPrecondition: return "precondition violated";
    case ErrorKind::kContractViolation: return "contract violation";
    case ErrorKind::kNumeric: return "numeric error";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kChartInvalid: return "chart invalid";
    case ErrorKind::kLiftStall: return "lift stall";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

}  // namespace frechet
