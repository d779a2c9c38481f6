#pragma once

#include <memory>
#include <sstream>

#include "glue/perception/backends.hpp"

namespace glue::perception {

// ---- wire format ----
//
// Requests are a verb line, a frame payload per frame, then one line per
// query/prompt/point. Frames travel as a header line
//   frame <width> <height> <frame_index> <payload_bytes>
// followed by exactly <payload_bytes> of lossless PNG. Results are text
// records terminated by a lone "end":
//   box <object_id> <row_min> <col_min> <row_max> <col_max> <confidence>
//   nobox <object_id>
//   mask <object_id> <H> <W> <n_runs> <runs...>
//   track <ordinal> <row> <col> <visibility>

std::string wire_frame_header(const Frame& frame, int frame_index, size_t payload_bytes);
std::string wire_box_record(const std::string& object_id, const BoundingBox& box);
std::string wire_nobox_record(const std::string& object_id);
std::string wire_mask_record(const Mask& mask);
std::string wire_track_record(int ordinal, const KeypointState& state);

struct WireFrameHeader {
  int width = 0, height = 0, frame_index = 0;
  size_t payload_bytes = 0;
};
WireFrameHeader parse_wire_frame_header(const std::string& line);
// Returns (object_id, box) or nullopt box for a nobox record.
std::pair<std::string, std::optional<BoundingBox>> parse_wire_box_record(const std::string& line);
Mask parse_wire_mask_record(const std::string& line);
std::pair<int, KeypointState> parse_wire_track_record(const std::string& line);

// ---- transport ----

class AdapterTransport {
 public:
  virtual ~AdapterTransport() = default;
  virtual void write_bytes(const char* data, size_t size) = 0;
  virtual std::string read_line() = 0;  // without trailing newline
  void write_str(const std::string& s) { write_bytes(s.data(), s.size()); }
};

// Launches an external model runtime and speaks the wire format over its
// stdin/stdout.
class SubprocessTransport : public AdapterTransport {
 public:
  explicit SubprocessTransport(const std::vector<std::string>& argv);
  ~SubprocessTransport() override;
  void write_bytes(const char* data, size_t size) override;
  std::string read_line() override;

 private:
  int in_fd_ = -1;   // child stdin (we write)
  int out_fd_ = -1;  // child stdout (we read)
  int pid_ = -1;
  std::string buffer_;
};

// ---- adapter backends (excluded from the hermetic core test suite) ----

class AdapterDetector : public DetectorBackend {
 public:
  explicit AdapterDetector(std::shared_ptr<AdapterTransport> transport)
      : transport_(std::move(transport)) {}
  std::vector<std::optional<BoundingBox>> try_detect(const Frame& frame,
                                                     const std::vector<TextQuery>& queries,
                                                     int frame_index) const override;

 private:
  std::shared_ptr<AdapterTransport> transport_;
};

class AdapterSegmenter : public SegmenterBackend {
 public:
  explicit AdapterSegmenter(std::shared_ptr<AdapterTransport> transport)
      : transport_(std::move(transport)) {}
  std::vector<Mask> segment(const Frame& frame, const std::vector<BoxPrompt>& prompts,
                            int frame_index) const override;

 private:
  std::shared_ptr<AdapterTransport> transport_;
};

class AdapterTracker : public TrackerBackend {
 public:
  explicit AdapterTracker(std::shared_ptr<AdapterTransport> transport)
      : transport_(std::move(transport)) {}
  std::vector<KeypointState> track(const std::vector<IndexedFrame>& frames,
                                   const std::vector<KeypointState>& initial) const override;

 private:
  std::shared_ptr<AdapterTransport> transport_;
};

}  // namespace glue::perception
