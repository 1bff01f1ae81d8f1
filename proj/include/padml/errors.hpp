#ifndef PADML_ERRORS_HPP
#define PADML_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace padml {

enum class ErrorCode {
  InvalidArgument,
  NotPIntegral,
  PrimeMismatch,
  NotAUnit,
  OutOfConvergenceDomain,
  IndistinguishableFromZero,
  TailAmbiguous,
  ConstantSeries,
  PrecisionExhausted,
  UncertifiedExpansion,
  NotPeriodicResidue,
  ResourceLimit,
  SyntaxError,
  UnknownVariable,
  DimensionMismatch,
  HorizonTooSmall,
  InsufficientData,
  IndeterminatePoint,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace padml

#endif
