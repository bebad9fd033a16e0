#include "coughcount/error.hpp"

namespace coughcount {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidEvent: return "invalid-event";
    case ErrorCode::kUnnormalized: return "unnormalized-timeline";
    case ErrorCode::kRecordingMismatch: return "recording-mismatch";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kZeroDuration: return "zero-duration";
    case ErrorCode::kSingleClass: return "single-class";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kUnknownRecording: return "unknown-recording";
    case ErrorCode::kAnnotationOutOfRange: return "annotation-out-of-range";
    case ErrorCode::kAnnotationOnNonCough: return "annotation-on-non-cough";
    case ErrorCode::kGridMismatch: return "grid-mismatch";
    case ErrorCode::kScoreOutOfRange: return "score-out-of-range";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kMissingFile: return "missing-file";
    case ErrorCode::kUnreadableWav: return "unreadable-wav";
    case ErrorCode::kUnsupportedWav: return "unsupported-wav";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

bool is_io_error(ErrorCode code) {
  return code == ErrorCode::kMissingFile || code == ErrorCode::kUnreadableWav ||
         code == ErrorCode::kIo;
}

}  // namespace coughcount
