#pragma once

#include <stdexcept>
#include <string>

namespace pqep {

enum class ErrorCode {
  ParseError,
  DimensionMismatch,
  StructureViolation,
  SingularA,
  ZeroEigenvalue,
  PairingViolation,
  ParityViolation,
  UnsupportedDefective,
  SingularAssembly,
  NotAStandardPair,
  SingularJ,
  UnimodularUnsupported,
  NotCongruent,
  SingularCore,
  ConditionViolation,
  DefectiveInput,
  SingularBlock,
  UnimodularInSpectrum,
  RetriesExhausted,
  SpectrumSizeOdd,
  CategoryMismatch,
  SingularUpdate,
  InvariantViolation,
  NotEigenpairs,
  ConvergenceFailure,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pqep
