#pragma once

#include <stdexcept>
#include <string>

namespace streamcra {

enum class ErrorCode {
  ParseError,
  IoError,
  UnknownDomain,
  UnknownOperation,
  PartialOperationRejected,
  AlgebraicTagViolation,
  ArityMismatch,
  UnboundRegister,
  MissingCurrentVal,
  AlphabetMismatch,
  EpsilonCycle,
  AmbiguityDetected,
  PreconditionViolation,
  BoundExceeded,
  NoConstant,
  NotUnambiguous,
  NonUnaryOperation,
  PrefixSumOnPartial,
  RegistryMismatch,
  NonLinearizableExpression,
  PartialRate,
  NotWellFormed,
  MalformedDag,
  TagOutOfAlphabet,
  ValueParseError,
  BudgetExceeded,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace streamcra
