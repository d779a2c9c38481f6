#pragma once

#include "glue/policy/noise_predictor.hpp"

namespace glue::policy {

// Descending step subsequence for accelerated sampling: K_infer entries from
// K down, then the implicit terminal 0.
std::vector<int> sampling_steps(int K, int K_infer);

// Iterates x_{k_prev} = alpha * (x_k - gamma * eps_hat + sigma * z) over the
// given descending subsequence, ending at the clean boundary. eta = 0 is
// fully deterministic; eta > 0 adds the ancestral noise share. Returns the
// unclipped result.
template <typename S>
nn::MatX<S> denoise(const NoisePredictor<S>& predictor, const DiffusionSchedule& schedule,
                    const nn::VecX<S>& condition, nn::MatX<S> x, const std::vector<int>& steps,
                    double eta = 0.0, Rng* rng = nullptr) {
  require(!steps.empty(), ErrorCode::invalid_argument, "denoise: empty step sequence");
  for (size_t i = 0; i < steps.size(); ++i) {
    const int k = steps[i];
    const int k_prev = (i + 1 < steps.size()) ? steps[i + 1] : 0;
    const nn::MatX<S> eps_hat = predictor.predict(condition, x, k);
    const double a = schedule.alpha_bar[k_prev] / schedule.alpha_bar[k];
    double sigma = 0.0;
    double dir = schedule.beta_bar[k_prev];
    if (eta > 0.0 && schedule.beta_bar[k] > 0.0 && k_prev > 0) {
      const double ratio = schedule.alpha_bar[k] / schedule.alpha_bar[k_prev];
      sigma = eta * (schedule.beta_bar[k_prev] / schedule.beta_bar[k]) *
              std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
      dir = std::sqrt(std::max(0.0, schedule.beta_bar[k_prev] * schedule.beta_bar[k_prev] -
                                        sigma * sigma));
    }
    const double gamma = schedule.beta_bar[k] - dir / a;
    x = static_cast<S>(a) * (x - static_cast<S>(gamma) * eps_hat);
    if (sigma > 0.0) {
      require(rng != nullptr, ErrorCode::invalid_argument, "denoise: stochastic mode needs rng");
      for (Eigen::Index r = 0; r < x.rows(); ++r)
        for (Eigen::Index c = 0; c < x.cols(); ++c)
          x(r, c) += static_cast<S>(a * sigma * rng->normal());
    }
  }
  return x;
}

// Full sampling op: start from standard normal A^K, run the accelerated
// deterministic subsequence, clip to [-1, 1].
template <typename S>
nn::MatX<S> sample_chunk(const NoisePredictor<S>& predictor, const DiffusionSchedule& schedule,
                         const nn::VecX<S>& condition, int K_infer, Rng& rng) {
  require(K_infer >= 1 && K_infer <= schedule.K, ErrorCode::invalid_argument,
          "sample_chunk: need 1 <= K_infer <= K");
  nn::MatX<S> x(predictor.horizon(), predictor.action_dim());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = static_cast<S>(rng.normal());
  x = denoise(predictor, schedule, condition, std::move(x), sampling_steps(schedule.K, K_infer));
  return x.cwiseMax(S(-1)).cwiseMin(S(1));
}

}  // namespace glue::policy
