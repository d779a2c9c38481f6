#pragma once

#include <json.hpp>

#include <map>

#include "glue/nn/tensor.hpp"

namespace glue::nn {

// Named-tensor archive: a JSON header carrying free-form metadata plus a
// shape manifest, followed by float32 row-major blobs in manifest order.
class TensorArchive {
 public:
  nlohmann::json meta;

  bool has(const std::string& name) const { return tensors_.count(name) > 0; }

  void put(const std::string& name, const MatF& m) { tensors_[name] = m; }
  void put(const std::string& name, const MatD& m) { tensors_[name] = m.cast<float>(); }

  const MatF& get(const std::string& name) const {
    auto it = tensors_.find(name);
    require(it != tensors_.end(), ErrorCode::bad_checkpoint, "archive: missing tensor " + name);
    return it->second;
  }

  template <typename S>
  void put_params(const ParamList<S>& params, const std::string& prefix = "") {
    for (const auto& p : params) put(prefix + p.name, MatX<S>(*p.value));
  }

  template <typename S>
  void load_params(const ParamList<S>& params, const std::string& prefix = "") const {
    for (const auto& p : params) {
      const MatF& src = get(prefix + p.name);
      require(src.rows() == p.value->rows() && src.cols() == p.value->cols(),
              ErrorCode::bad_checkpoint, "archive: shape mismatch for " + p.name);
      *p.value = src.cast<S>();
    }
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(tensors_.size());
    for (const auto& [k, v] : tensors_) out.push_back(k);
    return out;
  }

  void save(const std::string& path) const;
  static TensorArchive load(const std::string& path);

 private:
  std::map<std::string, MatF> tensors_;  // ordered: manifest order is stable
};

}  // namespace glue::nn
