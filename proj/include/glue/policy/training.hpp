#pragma once

#include "glue/policy/noise_predictor.hpp"

namespace glue::policy {

// Per-dimension min/max normalization of actions to [-1, 1], with the
// degenerate-range guard (constant dimensions map to 0 and back exactly).
struct ActionNormalizer {
  nn::VecD lo, hi;

  static ActionNormalizer fit(const std::vector<nn::MatD>& chunks);

  nn::VecD normalize(const nn::VecD& a) const;
  nn::VecD denormalize(const nn::VecD& a) const;
  nn::MatD normalize_rows(const nn::MatD& chunk) const;
  nn::MatD denormalize_rows(const nn::MatD& chunk) const;
};

template <typename S>
struct TrainItem {
  nn::VecX<S> condition;  // W
  nn::MatX<S> clean;      // normalized action chunk (H x D_a)
};

// One Eq.-(5) step over a batch: per item, k ~ U[1, K], eps ~ N(0, I),
// loss = mean over batch of MSE(eps, eps_theta(add_noise(clean, eps, k), W, k)).
// Parameter grads accumulate into the predictor; d_conditions (optional)
// receives dL/dW per item for upstream encoder backprop.
template <typename S>
double training_step(NoisePredictor<S>& predictor, const DiffusionSchedule& schedule,
                     const std::vector<TrainItem<S>>& batch, Rng& k_rng, Rng& noise_rng,
                     std::vector<nn::VecX<S>>* d_conditions = nullptr) {
  require(!batch.empty(), ErrorCode::invalid_argument, "training_step: empty batch");
  const int H = predictor.horizon(), D = predictor.action_dim();
  if (d_conditions) d_conditions->assign(batch.size(), nn::VecX<S>());

  double loss = 0.0;
  const double inv_elems = 1.0 / (static_cast<double>(H) * D);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    const int k = static_cast<int>(k_rng.uniform_int(1, schedule.K));
    nn::MatX<S> eps(H, D);
    for (int r = 0; r < H; ++r)
      for (int c = 0; c < D; ++c) eps(r, c) = static_cast<S>(noise_rng.normal());
    const nn::MatX<S> noised = add_noise<S>(batch[i].clean, eps, k, schedule);

    typename NoisePredictor<S>::Cache cache;
    const nn::MatX<S> pred = predictor.predict(batch[i].condition, noised, k, cache);
    const nn::MatX<S> diff = pred - eps;
    loss += diff.squaredNorm() * inv_elems * inv_batch;

    nn::MatX<S> d_pred = diff * static_cast<S>(2.0 * inv_elems * inv_batch);
    nn::VecX<S> d_cond;
    predictor.backward(d_pred, cache, d_conditions ? &d_cond : nullptr);
    if (d_conditions) (*d_conditions)[i] = std::move(d_cond);
  }
  return loss;
}

// Training chunk at offset t: rows are actions[t .. t+H), padded by
// repeating the final action.
nn::MatD chunk_at(const std::vector<std::array<float, 3>>& actions, int t, int horizon);

}  // namespace glue::policy
