#include "mackboot/error.hpp"

namespace mackboot {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveCell: return "NonPositiveCell";
    case ErrorCode::RaggedShapeMismatch: return "RaggedShapeMismatch";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::TriangleTooSmall: return "TriangleTooSmall";
    case ErrorCode::DiagonalMismatch: return "DiagonalMismatch";
    case ErrorCode::InvalidMoments: return "InvalidMoments";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::InsufficientReplications: return "InsufficientReplications";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::SampleTooSmall: return "SampleTooSmall";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::NumericFailure: return "NumericFailure";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

ErrorCategory category(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyPool:
    case ErrorCode::RejectionBudgetExceeded:
    case ErrorCode::NumericFailure:
      return ErrorCategory::Numeric;
    case ErrorCode::FileNotFound:
    case ErrorCode::IoFailure:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Input;
  }
}

int exit_code(ErrorCode code) {
  switch (category(code)) {
    case ErrorCategory::Input: return 1;
    case ErrorCategory::Numeric: return 2;
    case ErrorCategory::Io: return 3;
  }
  return 1;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace mackboot
