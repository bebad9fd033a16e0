#pragma once

#include <stdexcept>
#include <string>

namespace coughcount {

// Every failure the library reports carries one of these codes so callers
// (and the CLI exit status) can tell validation problems from I/O problems.
enum class ErrorCode {
  kInvalidArgument,
  kInvalidEvent,
  kUnnormalized,
  kRecordingMismatch,
  kEmptyInput,
  kZeroDuration,
  kSingleClass,
  kLengthMismatch,
  kUnknownRecording,
  kAnnotationOutOfRange,
  kAnnotationOnNonCough,
  kGridMismatch,
  kScoreOutOfRange,
  kParse,
  kInfeasible,
  kMissingFile,
  kUnreadableWav,
  kUnsupportedWav,
  kIo,
};

const char* to_string(ErrorCode code);

// I/O codes map to exit status 2, everything else to 1.
bool is_io_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace coughcount
