#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mackboot {

enum class ErrorCode {
  // input
  NonPositiveCell,
  RaggedShapeMismatch,
  NonNumericCell,
  NonSquare,
  TriangleTooSmall,
  DiagonalMismatch,
  InvalidMoments,
  InvalidLevel,
  InsufficientReplications,
  ShapeMismatch,
  EmptySample,
  SampleTooSmall,
  InvalidConfig,
  // numeric
  EmptyPool,
  RejectionBudgetExceeded,
  NumericFailure,
  // io
  FileNotFound,
  IoFailure,
};

enum class ErrorCategory { Input, Numeric, Io };

std::string_view to_string(ErrorCode code);
ErrorCategory category(ErrorCode code);

/// Process exit code for a failure of the given kind (1 input, 2 numeric, 3 I/O).
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mackboot
