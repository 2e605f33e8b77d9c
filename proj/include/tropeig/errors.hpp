#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tropeig {

// Stable error codes. The CLI maps these onto process exit codes.
enum class ErrorCode {
  kParse = 10,
  kInconsistentSamples = 11,
  kInfeasible = 12,
  kInvalidPair = 13,
  kSingularTropPencil = 14,
  kZeroPolynomial = 15,
  kSingularPencil = 16,
  kInconsistentSpec = 17,
  kMatchFailure = 18,
  kTooLarge = 19,
  kInvalidArgument = 20,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kInconsistentSamples: return "InconsistentSamples";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kInvalidPair: return "InvalidPair";
    case ErrorCode::kSingularTropPencil: return "SingularTropPencil";
    case ErrorCode::kZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::kSingularPencil: return "SingularPencil";
    case ErrorCode::kInconsistentSpec: return "InconsistentSpec";
    case ErrorCode::kMatchFailure: return "MatchFailure";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <ErrorCode Code>
class CodedError : public Error {
 public:
  explicit CodedError(const std::string& what) : Error(Code, what) {}
};

using ParseError = CodedError<ErrorCode::kParse>;
using InconsistentSamples = CodedError<ErrorCode::kInconsistentSamples>;
using Infeasible = CodedError<ErrorCode::kInfeasible>;
using InvalidPair = CodedError<ErrorCode::kInvalidPair>;
using SingularTropPencil = CodedError<ErrorCode::kSingularTropPencil>;
using ZeroPolynomial = CodedError<ErrorCode::kZeroPolynomial>;
using SingularPencil = CodedError<ErrorCode::kSingularPencil>;
using InconsistentSpec = CodedError<ErrorCode::kInconsistentSpec>;
using MatchFailure = CodedError<ErrorCode::kMatchFailure>;
using TooLarge = CodedError<ErrorCode::kTooLarge>;
using InvalidArgument = CodedError<ErrorCode::kInvalidArgument>;

}  // namespace tropeig
