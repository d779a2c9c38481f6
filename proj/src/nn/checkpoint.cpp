#include "glue/nn/checkpoint.hpp"

#include <fstream>

#include "glue/core/io_util.hpp"

namespace glue::nn {

static constexpr char kMagic[8] = {'G', 'L', 'U', 'E', 'N', 'T', 'A', '1'};

void TensorArchive::save(const std::string& path) const {
  nlohmann::json header;
  header["format"] = "glue-tensor-archive/1";
  header["meta"] = meta;
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& [name, m] : tensors_) {
    manifest.push_back({{"name", name},
                        {"rows", m.rows()},
                        {"cols", m.cols()},
                        {"dtype", "f32"}});
  }
  header["tensors"] = manifest;
  const std::string header_str = header.dump();

  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::io_error, "archive: cannot open " + path);
  out.write(kMagic, 8);
  write_pod<uint64_t>(out, header_str.size());
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  for (const auto& [name, m] : tensors_) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(float) * m.size()));
  }
  require(out.good(), ErrorCode::io_error, "archive: write failed " + path);
}

TensorArchive TensorArchive::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::bad_checkpoint, "archive: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  require(in.good() && std::equal(magic, magic + 8, kMagic), ErrorCode::bad_checkpoint,
          "archive: bad magic in " + path);
  const uint64_t header_len = read_pod<uint64_t>(in);
  std::string header_str(header_len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(header_len));
  require(in.good(), ErrorCode::bad_checkpoint, "archive: truncated header");
  nlohmann::json header = nlohmann::json::parse(header_str);

  TensorArchive arch;
  arch.meta = header.value("meta", nlohmann::json::object());
  for (const auto& t : header.at("tensors")) {
    const std::string name = t.at("name");
    const Eigen::Index rows = t.at("rows");
    const Eigen::Index cols = t.at("cols");
    MatF m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(float) * m.size()));
    require(in.good(), ErrorCode::bad_checkpoint, "archive: truncated tensor " + name);
    arch.tensors_[name] = std::move(m);
  }
  return arch;
}

}  // namespace glue::nn
