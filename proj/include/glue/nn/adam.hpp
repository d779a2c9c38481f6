#pragma once

#include "glue/nn/tensor.hpp"

namespace glue::nn {

template <typename S>
class Adam {
 public:
  Adam() = default;
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void attach(const ParamList<S>& params) {
    m_.clear();
    v_.clear();
    for (const auto& p : params) {
      m_.push_back(MatX<S>::Zero(p.value->rows(), p.value->cols()));
      v_.push_back(MatX<S>::Zero(p.value->rows(), p.value->cols()));
    }
    step_ = 0;
  }

  void step(const ParamList<S>& params) {
    require(m_.size() == params.size(), ErrorCode::internal, "adam: not attached to these params");
    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, step_);
    const double bc2 = 1.0 - std::pow(beta2_, step_);
    const S alpha = static_cast<S>(lr_ * std::sqrt(bc2) / bc1);
    for (size_t i = 0; i < params.size(); ++i) {
      const MatX<S>& g = *params[i].grad;
      m_[i] = static_cast<S>(beta1_) * m_[i] + static_cast<S>(1.0 - beta1_) * g;
      v_[i] = static_cast<S>(beta2_) * v_[i] +
              static_cast<S>(1.0 - beta2_) * g.cwiseProduct(g);
      params[i].value->array() -=
          alpha * m_[i].array() / (v_[i].array().sqrt() + static_cast<S>(eps_ * std::sqrt(bc2)));
    }
  }

  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }
  int64_t step_count() const { return step_; }

  // Serialization hooks for exact training resume.
  std::vector<MatX<S>>& moment1() { return m_; }
  std::vector<MatX<S>>& moment2() { return v_; }
  void set_step_count(int64_t s) { step_ = s; }

 private:
  double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  int64_t step_ = 0;
  std::vector<MatX<S>> m_;
  std::vector<MatX<S>> v_;
};

}  // namespace glue::nn
