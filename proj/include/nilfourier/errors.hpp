#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nilfourier {

enum class ErrorCode {
  InvalidSpec,
  Overflow,
  DependentBasis,
  DegreeMismatch,
  NotInLieImage,
  SpecMismatch,
  RoleError,
  DimensionMismatch,
  IndexOutOfRange,
  DegenerateSpec,
  SamplingExhausted,
  NotGeneric,
  NotPolarization,
  QuadratureUnderflow,
  NegativeDeterminant,
  NonConvergence,
  InvalidInput,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nilfourier
