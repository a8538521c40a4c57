#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frechet {

enum class ErrorKind {
  kStructural,         // dimension or shape mismatch
  kPrecondition,       // documented precondition violated (entry condition, theta >= 1, ...)
  kContractViolation,  // an iterate left its ball, a sampled bound was violated
  kNumeric,            // bisection or step-size breakdown
  kUnsupported,        // e.g. sum-form metric handed to a solver
  kChartInvalid,       // sigma * ||A^-1|| >= 1
  kLiftStall,          // continuation step floor reached
  kConfig,             // malformed configuration or unknown scenario
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace frechet
