#include "glue/core/error.hpp"

namespace glue {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "Ok";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::unresolved_query: return "UnresolvedQuery";
    case ErrorCode::empty_mask: return "EmptyMask";
    case ErrorCode::resolution_mismatch: return "ResolutionMismatch";
    case ErrorCode::tracker_failure: return "TrackerFailure";
    case ErrorCode::mask_too_small: return "MaskTooSmall";
    case ErrorCode::empty_track_set: return "EmptyTrackSet";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::invalid_task: return "InvalidTask";
    case ErrorCode::placement_failure: return "PlacementFailure";
    case ErrorCode::expert_failure: return "ExpertFailure";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::bad_config: return "BadConfig";
    case ErrorCode::bad_checkpoint: return "BadCheckpoint";
    case ErrorCode::protocol_mismatch: return "ProtocolMismatch";
    case ErrorCode::internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace glue
