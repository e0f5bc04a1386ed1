#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tenlog {

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidShape,
  kNotSquare,
  kTooLarge,
  kEmptyDomain,
  kUnknownAtom,
  kUnknownPredicate,
  kUnknownRelation,
  kUnknownName,
  kNonCharacteristic,
  kNonOneHot,
  kArityMismatch,
  kInvalidPredicateMatrix,
  kInvalidRelationTensor,
  kInvalidSetPredicate,
  kInvalidConnective,
  kInvalidTruthVec,
  kUnknownConnective,
  kSyntaxError,
  kDuplicateName,
  kUnknownAtomInExtension,
  kArityError,
  kEmbeddedQuantifier,
  kPlanTooLarge,
  kInternal,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidShape: return "InvalidShape";
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kEmptyDomain: return "EmptyDomain";
    case ErrorCode::kUnknownAtom: return "UnknownAtom";
    case ErrorCode::kUnknownPredicate: return "UnknownPredicate";
    case ErrorCode::kUnknownRelation: return "UnknownRelation";
    case ErrorCode::kUnknownName: return "UnknownName";
    case ErrorCode::kNonCharacteristic: return "NonCharacteristic";
    case ErrorCode::kNonOneHot: return "NonOneHot";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kInvalidPredicateMatrix: return "InvalidPredicateMatrix";
    case ErrorCode::kInvalidRelationTensor: return "InvalidRelationTensor";
    case ErrorCode::kInvalidSetPredicate: return "InvalidSetPredicate";
    case ErrorCode::kInvalidConnective: return "InvalidConnective";
    case ErrorCode::kInvalidTruthVec: return "InvalidTruthVec";
    case ErrorCode::kUnknownConnective: return "UnknownConnective";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kUnknownAtomInExtension: return "UnknownAtomInExtension";
    case ErrorCode::kArityError: return "ArityError";
    case ErrorCode::kEmbeddedQuantifier: return "EmbeddedQuantifier";
    case ErrorCode::kPlanTooLarge: return "PlanTooLarge";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a stable
/// code; the message is for humans only.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tenlog
