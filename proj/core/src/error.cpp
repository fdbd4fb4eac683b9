#include "streamcra/error.hpp"

namespace streamcra {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownDomain: return "UnknownDomain";
    case ErrorCode::UnknownOperation: return "UnknownOperation";
    case ErrorCode::PartialOperationRejected: return "PartialOperationRejected";
    case ErrorCode::AlgebraicTagViolation: return "AlgebraicTagViolation";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnboundRegister: return "UnboundRegister";
    case ErrorCode::MissingCurrentVal: return "MissingCurrentVal";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::EpsilonCycle: return "EpsilonCycle";
    case ErrorCode::AmbiguityDetected: return "AmbiguityDetected";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::NoConstant: return "NoConstant";
    case ErrorCode::NotUnambiguous: return "NotUnambiguous";
    case ErrorCode::NonUnaryOperation: return "NonUnaryOperation";
    case ErrorCode::PrefixSumOnPartial: return "PrefixSumOnPartial";
    case ErrorCode::RegistryMismatch: return "RegistryMismatch";
    case ErrorCode::NonLinearizableExpression: return "NonLinearizableExpression";
    case ErrorCode::PartialRate: return "PartialRate";
    case ErrorCode::NotWellFormed: return "NotWellFormed";
    case ErrorCode::MalformedDag: return "MalformedDag";
    case ErrorCode::TagOutOfAlphabet: return "TagOutOfAlphabet";
    case ErrorCode::ValueParseError: return "ValueParseError";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace streamcra
