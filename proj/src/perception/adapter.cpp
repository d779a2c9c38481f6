#include "glue/perception/adapter.hpp"

#include <unistd.h>
#include <sys/wait.h>

#include <csignal>

#include "glue/core/png_io.hpp"

namespace glue::perception {

std::string wire_frame_header(const Frame& frame, int frame_index, size_t payload_bytes) {
  std::ostringstream out;
  out << "frame " << frame.width << ' ' << frame.height << ' ' << frame_index << ' '
      << payload_bytes << '\n';
  return out.str();
}

std::string wire_box_record(const std::string& object_id, const BoundingBox& box) {
  std::ostringstream out;
  out << "box " << object_id << ' ' << box.row_min << ' ' << box.col_min << ' ' << box.row_max
      << ' ' << box.col_max << ' ' << box.confidence << '\n';
  return out.str();
}

std::string wire_nobox_record(const std::string& object_id) { return "nobox " + object_id + "\n"; }

std::string wire_mask_record(const Mask& mask) {
  return "mask " + mask.object_id + " " + RleBitmap::encode(mask.bitmap).to_text() + "\n";
}

std::string wire_track_record(int ordinal, const KeypointState& state) {
  std::ostringstream out;
  out << "track " << ordinal << ' ' << state.row << ' ' << state.col << ' ' << state.visibility
      << '\n';
  return out.str();
}

WireFrameHeader parse_wire_frame_header(const std::string& line) {
  std::istringstream in(line);
  std::string verb;
  WireFrameHeader h;
  in >> verb >> h.width >> h.height >> h.frame_index >> h.payload_bytes;
  require(!in.fail() && verb == "frame", ErrorCode::io_error, "wire: bad frame header");
  return h;
}

std::pair<std::string, std::optional<BoundingBox>> parse_wire_box_record(const std::string& line) {
  std::istringstream in(line);
  std::string verb, id;
  in >> verb >> id;
  require(!in.fail() && (verb == "box" || verb == "nobox"), ErrorCode::io_error,
          "wire: bad box record");
  if (verb == "nobox") return {id, std::nullopt};
  BoundingBox box;
  in >> box.row_min >> box.col_min >> box.row_max >> box.col_max >> box.confidence;
  require(!in.fail(), ErrorCode::io_error, "wire: bad box record");
  return {id, box};
}

Mask parse_wire_mask_record(const std::string& line) {
  std::istringstream in(line);
  std::string verb, id;
  in >> verb >> id;
  require(!in.fail() && verb == "mask", ErrorCode::io_error, "wire: bad mask record");
  std::string rest;
  std::getline(in, rest);
  Mask mask;
  mask.object_id = id;
  mask.bitmap = RleBitmap::from_text(rest).decode();
  mask.within_prompt_box = false;  // adapter-produced: not guaranteed
  return mask;
}

std::pair<int, KeypointState> parse_wire_track_record(const std::string& line) {
  std::istringstream in(line);
  std::string verb;
  int ordinal = 0;
  KeypointState state;
  in >> verb >> ordinal >> state.row >> state.col >> state.visibility;
  require(!in.fail() && verb == "track", ErrorCode::io_error, "wire: bad track record");
  return {ordinal, state};
}

// ---- subprocess transport ----

SubprocessTransport::SubprocessTransport(const std::vector<std::string>& argv) {
  require(!argv.empty(), ErrorCode::invalid_argument, "adapter: empty command");
  int to_child[2], from_child[2];
  require(pipe(to_child) == 0 && pipe(from_child) == 0, ErrorCode::io_error,
          "adapter: pipe failed");
  pid_ = fork();
  require(pid_ >= 0, ErrorCode::io_error, "adapter: fork failed");
  if (pid_ == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  in_fd_ = to_child[1];
  out_fd_ = from_child[0];
}

SubprocessTransport::~SubprocessTransport() {
  if (in_fd_ >= 0) close(in_fd_);
  if (out_fd_ >= 0) close(out_fd_);
  if (pid_ > 0) {
    kill(pid_, SIGTERM);
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

void SubprocessTransport::write_bytes(const char* data, size_t size) {
  size_t written = 0;
  while (written < size) {
    const ssize_t n = ::write(in_fd_, data + written, size - written);
    require(n > 0, ErrorCode::io_error, "adapter: write to model runtime failed");
    written += static_cast<size_t>(n);
  }
}

std::string SubprocessTransport::read_line() {
  for (;;) {
    const size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    const ssize_t n = ::read(out_fd_, chunk, sizeof(chunk));
    require(n > 0, ErrorCode::io_error, "adapter: model runtime closed the stream");
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

// ---- adapters ----

namespace {

void send_frame(AdapterTransport& t, const Frame& frame, int frame_index) {
  const std::vector<uint8_t> png = encode_png(frame);
  t.write_str(wire_frame_header(frame, frame_index, png.size()));
  t.write_bytes(reinterpret_cast<const char*>(png.data()), png.size());
}

[[noreturn]] void bad_response(const std::string& line) {
  raise(ErrorCode::io_error, "adapter: unexpected response '" + line + "'");
}

}  // namespace

std::vector<std::optional<BoundingBox>> AdapterDetector::try_detect(
    const Frame& frame, const std::vector<TextQuery>& queries, int frame_index) const {
  AdapterTransport& t = *transport_;
  t.write_str("detect " + std::to_string(queries.size()) + "\n");
  send_frame(t, frame, frame_index);
  for (const auto& q : queries) t.write_str("query " + q.object_id + " " + q.text + "\n");

  std::vector<std::optional<BoundingBox>> out(queries.size());
  for (;;) {
    const std::string line = t.read_line();
    if (line == "end") break;
    auto [id, box] = parse_wire_box_record(line);
    for (size_t i = 0; i < queries.size(); ++i)
      if (queries[i].object_id == id) out[i] = box;
  }
  return out;
}

std::vector<Mask> AdapterSegmenter::segment(const Frame& frame,
                                            const std::vector<BoxPrompt>& prompts,
                                            int frame_index) const {
  AdapterTransport& t = *transport_;
  t.write_str("segment " + std::to_string(prompts.size()) + "\n");
  send_frame(t, frame, frame_index);
  for (const auto& p : prompts) {
    std::ostringstream line;
    line << "prompt " << p.object_id << ' ' << p.box.row_min << ' ' << p.box.col_min << ' '
         << p.box.row_max << ' ' << p.box.col_max << '\n';
    t.write_str(line.str());
  }
  std::vector<Mask> by_prompt(prompts.size());
  std::vector<bool> seen(prompts.size(), false);
  for (;;) {
    const std::string line = t.read_line();
    if (line == "end") break;
    Mask mask = parse_wire_mask_record(line);
    bool matched = false;
    for (size_t i = 0; i < prompts.size(); ++i)
      if (prompts[i].object_id == mask.object_id) {
        by_prompt[i] = std::move(mask);
        seen[i] = true;
        matched = true;
        break;
      }
    if (!matched) bad_response(line);
  }
  for (size_t i = 0; i < prompts.size(); ++i) {
    require(seen[i], ErrorCode::empty_mask,
            "adapter segmenter returned nothing for '" + prompts[i].object_id + "'");
    if (by_prompt[i].bitmap.count() == 0)
      raise(ErrorCode::empty_mask,
            "adapter segmenter returned zero pixels for '" + prompts[i].object_id + "'");
  }
  return by_prompt;
}

std::vector<KeypointState> AdapterTracker::track(const std::vector<IndexedFrame>& frames,
                                                 const std::vector<KeypointState>& initial) const {
  require(!frames.empty(), ErrorCode::tracker_failure, "adapter tracker: no frames");
  AdapterTransport& t = *transport_;
  t.write_str("track " + std::to_string(frames.size()) + " " + std::to_string(initial.size()) +
              "\n");
  for (const auto& f : frames) send_frame(t, *f.frame, f.frame_index);
  for (size_t i = 0; i < initial.size(); ++i) {
    std::ostringstream line;
    line << "point " << i << ' ' << initial[i].row << ' ' << initial[i].col << ' '
         << initial[i].visibility << '\n';
    t.write_str(line.str());
  }
  std::vector<KeypointState> out = initial;
  std::vector<bool> seen(initial.size(), false);
  for (;;) {
    const std::string line = t.read_line();
    if (line == "end") break;
    auto [ordinal, state] = parse_wire_track_record(line);
    if (ordinal < 0 || ordinal >= static_cast<int>(initial.size())) bad_response(line);
    out[ordinal].row = state.row;
    out[ordinal].col = state.col;
    out[ordinal].visibility = state.visibility;
    out[ordinal].frame_index = frames.back().frame_index;
    seen[ordinal] = true;
  }
  for (bool s : seen)
    require(s, ErrorCode::tracker_failure, "adapter tracker: missing point estimates");
  return out;
}

}  // namespace glue::perception
