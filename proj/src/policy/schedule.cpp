#include "glue/policy/schedule.hpp"

#include <cmath>

namespace glue::policy {

DiffusionSchedule make_schedule(int K, const std::string& profile) {
  require(K >= 1, ErrorCode::invalid_argument, "make_schedule: K >= 1");
  require(profile == "squared-cosine", ErrorCode::invalid_argument,
          "make_schedule: unknown profile '" + profile + "'");

  DiffusionSchedule s;
  s.K = K;
  s.alpha_bar.resize(K + 1);
  s.beta_bar.resize(K + 1);

  // squared-cosine signal schedule with the usual 0.999 per-step beta cap,
  // kept in sqrt-cumulative form so alpha_bar[k]^2 + beta_bar[k]^2 = 1
  const double offset = 0.008;
  auto f = [&](double t) {
    const double u = (t / K + offset) / (1.0 + offset) * (3.14159265358979323846 / 2.0);
    const double c = std::cos(u);
    return c * c;
  };
  double cum = 1.0;
  s.alpha_bar[0] = 1.0;
  s.beta_bar[0] = 0.0;
  for (int k = 1; k <= K; ++k) {
    double step = f(k) / f(k - 1);  // 1 - beta_k
    step = std::max(step, 1.0 - 0.999);
    cum *= step;
    s.alpha_bar[k] = std::sqrt(cum);
    s.beta_bar[k] = std::sqrt(1.0 - cum);
  }

  // per-step deterministic sampler coefficients (sigma = 0)
  s.alpha_step.assign(K + 1, 0.0);
  s.gamma_step.assign(K + 1, 0.0);
  s.sigma_step.assign(K + 1, 0.0);
  for (int k = 1; k <= K; ++k) {
    const double a = s.alpha_bar[k - 1] / s.alpha_bar[k];
    s.alpha_step[k] = a;
    s.gamma_step[k] = s.beta_bar[k] - s.beta_bar[k - 1] / a;
  }
  return s;
}

void DiffusionSchedule::stride_coeffs(int k, int k_prev, double* alpha, double* gamma,
                                      double* sigma) const {
  require(k >= 1 && k <= K && k_prev >= 0 && k_prev < k, ErrorCode::invalid_argument,
          "stride_coeffs: need 0 <= k_prev < k <= K");
  const double a = alpha_bar[k_prev] / alpha_bar[k];
  *alpha = a;
  *gamma = beta_bar[k] - beta_bar[k_prev] / a;
  if (sigma) *sigma = 0.0;
}

}  // namespace glue::policy
