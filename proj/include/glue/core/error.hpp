#pragma once

#include <stdexcept>
#include <string>

namespace glue {

enum class ErrorCode : int {
  ok = 0,
  invalid_argument = 1,
  unresolved_query = 2,
  empty_mask = 3,
  resolution_mismatch = 4,
  tracker_failure = 5,
  mask_too_small = 6,
  empty_track_set = 7,
  dimension_mismatch = 8,
  invalid_task = 9,
  placement_failure = 10,
  expert_failure = 11,
  io_error = 12,
  bad_config = 13,
  bad_checkpoint = 14,
  protocol_mismatch = 15,
  internal = 16,
};

const char* error_code_name(ErrorCode code);

class GlueError : public std::runtime_error {
 public:
  GlueError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw GlueError(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) raise(code, message);
}

}  // namespace glue
