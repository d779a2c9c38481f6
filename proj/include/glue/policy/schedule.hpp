#pragma once

#include <string>
#include <vector>

#include "glue/nn/tensor.hpp"

namespace glue::policy {

// Variance-preserving schedule in signal/noise-coefficient form:
// alpha_bar[k]^2 + beta_bar[k]^2 = 1, alpha_bar strictly decreasing,
// alpha_bar[0] = 1 (clean end). Index k runs 0..K.
struct DiffusionSchedule {
  int K = 0;
  std::vector<double> alpha_bar;  // signal coefficient
  std::vector<double> beta_bar;   // noise coefficient
  // Per-step sampler coefficients for the k -> k-1 update
  //   x_{k-1} = alpha_step[k] * (x_k - gamma_step[k] * eps_hat + sigma noise)
  std::vector<double> alpha_step;  // index 1..K ([0] unused)
  std::vector<double> gamma_step;
  std::vector<double> sigma_step;  // stochastic (eta=1) sigma; 0 in deterministic mode

  // Coefficients for a strided update k -> k_prev (k_prev < k).
  void stride_coeffs(int k, int k_prev, double* alpha, double* gamma, double* sigma) const;
};

// profile: "squared-cosine" (default). K >= 1 required.
DiffusionSchedule make_schedule(int K, const std::string& profile = "squared-cosine");

// Returns alpha_bar[k]*clean + beta_bar[k]*noise. k in [0, K]; k = 0 is the
// identity (clean boundary).
template <typename S>
nn::MatX<S> add_noise(const nn::MatX<S>& clean, const nn::MatX<S>& noise, int k,
                      const DiffusionSchedule& schedule) {
  require(k >= 0 && k <= schedule.K, ErrorCode::invalid_argument, "add_noise: k outside [0, K]");
  require(clean.rows() == noise.rows() && clean.cols() == noise.cols(),
          ErrorCode::dimension_mismatch, "add_noise: clean/noise shape mismatch");
  return static_cast<S>(schedule.alpha_bar[k]) * clean +
         static_cast<S>(schedule.beta_bar[k]) * noise;
}

}  // namespace glue::policy
