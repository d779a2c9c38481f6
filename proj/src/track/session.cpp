#include "glue/track/session.hpp"

#include <algorithm>
#include <sstream>

namespace glue::track {

TrackerSession::TrackerSession(const std::vector<Keypoint>& initial_keypoints,
                               const Frame& first_frame) {
  require(!initial_keypoints.empty(), ErrorCode::empty_track_set,
          "open_session: no keypoints to track");
  require(first_frame.valid(), ErrorCode::invalid_argument, "open_session: invalid frame");
  height_ = first_frame.height;
  width_ = first_frame.width;
  first_frame_ = first_frame;

  initial_.reserve(initial_keypoints.size());
  for (const Keypoint& kp : initial_keypoints) {
    KeypointState s;
    s.row = kp.row;
    s.col = kp.col;
    s.visibility = 1.0;
    s.object_id = kp.object_id;
    s.cluster_index = kp.cluster_index;
    s.frame_index = 1;
    initial_.push_back(s);
  }
  current_ = initial_;
  last_index_ = 1;
}

const std::vector<KeypointState>& TrackerSession::advance(
    const Frame& new_frame, const perception::TrackerBackend& backend) {
  require(new_frame.height == height_ && new_frame.width == width_, ErrorCode::invalid_argument,
          "advance: frame size changed mid-episode");
  const int new_index = last_index_ + 1;
  window_.push_back(new_frame);
  window_index_.push_back(new_index);
  while (static_cast<int>(window_.size()) > kWindow) {
    window_.pop_front();
    window_index_.pop_front();
  }

  std::vector<perception::IndexedFrame> frames;
  frames.reserve(window_.size() + 1);
  frames.push_back({&first_frame_, 1});
  for (size_t i = 0; i < window_.size(); ++i) frames.push_back({&window_[i], window_index_[i]});

  std::vector<KeypointState> states;
  try {
    states = backend.track(frames, initial_);
  } catch (...) {
    window_.pop_back();  // stay at the previous frame
    window_index_.pop_back();
    throw;
  }
  require(states.size() == initial_.size(), ErrorCode::tracker_failure,
          "advance: backend returned wrong cardinality");

  for (size_t i = 0; i < states.size(); ++i) {
    KeypointState& s = states[i];
    s.object_id = initial_[i].object_id;
    s.cluster_index = initial_[i].cluster_index;
    s.frame_index = new_index;
    if (s.row < 0 || s.row > height_ - 1 || s.col < 0 || s.col > width_ - 1) s.visibility = 0.0;
    s.row = std::clamp(s.row, 0.0, static_cast<double>(height_ - 1));
    s.col = std::clamp(s.col, 0.0, static_cast<double>(width_ - 1));
    s.visibility = std::clamp(s.visibility, 0.0, 1.0);
  }
  current_ = std::move(states);
  last_index_ = new_index;
  return current_;
}

std::vector<KeypointState> threshold_visibility(const std::vector<KeypointState>& states,
                                                double tau) {
  require(tau > 0.0 && tau < 1.0, ErrorCode::invalid_argument,
          "threshold_visibility: tau must be in (0,1)");
  std::vector<KeypointState> out = states;
  for (auto& s : out) s.visibility = s.visibility >= tau ? 1.0 : 0.0;
  return out;
}

std::string track_log_header(int n_points) {
  return "# glue-track-log/1 points=" + std::to_string(n_points) + "\n";
}

std::string track_log_line(int frame_index, int ordinal, const KeypointState& raw,
                           int binary_visibility) {
  std::ostringstream out;
  out << frame_index << ' ' << ordinal << ' ' << raw.row << ' ' << raw.col << ' '
      << raw.visibility << ' ' << binary_visibility << '\n';
  return out.str();
}

std::vector<TrackLogEntry> parse_track_log(const std::string& text, int* n_points) {
  std::istringstream in(text);
  std::string line;
  require(std::getline(in, line) && line.rfind("# glue-track-log/1", 0) == 0, ErrorCode::io_error,
          "track log: bad header");
  if (n_points) {
    const auto pos = line.find("points=");
    require(pos != std::string::npos, ErrorCode::io_error, "track log: missing point count");
    *n_points = std::stoi(line.substr(pos + 7));
  }
  std::vector<TrackLogEntry> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    TrackLogEntry e;
    ls >> e.frame_index >> e.ordinal >> e.row >> e.col >> e.raw_visibility >> e.binary_visibility;
    require(!ls.fail(), ErrorCode::io_error, "track log: bad line '" + line + "'");
    out.push_back(e);
  }
  return out;
}

}  // namespace glue::track
