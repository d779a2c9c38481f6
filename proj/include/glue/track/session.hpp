#pragma once

#include <deque>

#include "glue/perception/backends.hpp"

namespace glue::track {

// Streaming tracker state for one episode. Single-owner. The frame buffer
// retains frame 1 plus a sliding window of the most recent frames; the
// backend receives that window (the oracle backend ignores it).
class TrackerSession {
 public:
  static constexpr int kWindow = 16;

  // Keypoints must come from the first frame; all states start at frame 1
  // with visibility 1. Throws EmptyTrackSet.
  TrackerSession(const std::vector<Keypoint>& initial_keypoints, const Frame& first_frame);

  // Consumes the next frame, returns states at the new frame index (one per
  // initial query, initial ordering). On TrackerFailure the session is left
  // at the previous frame.
  const std::vector<KeypointState>& advance(const Frame& new_frame,
                                            const perception::TrackerBackend& backend);

  const std::vector<KeypointState>& initial_queries() const { return initial_; }
  const std::vector<KeypointState>& current_states() const { return current_; }
  int current_frame_index() const { return last_index_; }
  int frame_height() const { return height_; }
  int frame_width() const { return width_; }

 private:
  std::vector<KeypointState> initial_;
  std::vector<KeypointState> current_;
  Frame first_frame_;
  std::deque<Frame> window_;       // most recent frames, newest last
  std::deque<int> window_index_;
  int last_index_ = 1;
  int height_ = 0, width_ = 0;
};

// Maps raw visibility to binary: 1 iff visibility >= tau (boundary
// inclusive). Coordinates unchanged. Requires tau in (0,1).
std::vector<KeypointState> threshold_visibility(const std::vector<KeypointState>& states,
                                                double tau);

// Line-oriented track log: one record per (frame, point):
//   <frame_index> <ordinal> <row> <col> <raw_visibility> <binary_visibility>
std::string track_log_header(int n_points);
std::string track_log_line(int frame_index, int ordinal, const KeypointState& raw,
                           int binary_visibility);

struct TrackLogEntry {
  int frame_index = 0;
  int ordinal = 0;
  double row = 0, col = 0;
  double raw_visibility = 0;
  int binary_visibility = 0;
};
std::vector<TrackLogEntry> parse_track_log(const std::string& text, int* n_points = nullptr);

}  // namespace glue::track
