#include "glue/policy/training.hpp"

namespace glue::policy {

ActionNormalizer ActionNormalizer::fit(const std::vector<nn::MatD>& chunks) {
  require(!chunks.empty(), ErrorCode::invalid_argument, "normalizer: no data");
  const Eigen::Index dim = chunks[0].cols();
  ActionNormalizer norm;
  norm.lo = nn::VecD::Constant(dim, std::numeric_limits<double>::infinity());
  norm.hi = nn::VecD::Constant(dim, -std::numeric_limits<double>::infinity());
  for (const auto& chunk : chunks)
    for (Eigen::Index r = 0; r < chunk.rows(); ++r)
      for (Eigen::Index c = 0; c < dim; ++c) {
        norm.lo(c) = std::min(norm.lo(c), chunk(r, c));
        norm.hi(c) = std::max(norm.hi(c), chunk(r, c));
      }
  return norm;
}

namespace {
constexpr double kDegenerate = 1e-9;
}

nn::VecD ActionNormalizer::normalize(const nn::VecD& a) const {
  nn::VecD out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double span = hi(i) - lo(i);
    out(i) = span < kDegenerate ? 0.0 : 2.0 * (a(i) - lo(i)) / span - 1.0;
  }
  return out;
}

nn::VecD ActionNormalizer::denormalize(const nn::VecD& a) const {
  nn::VecD out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double span = hi(i) - lo(i);
    out(i) = span < kDegenerate ? lo(i) : lo(i) + (a(i) + 1.0) * span / 2.0;
  }
  return out;
}

nn::MatD ActionNormalizer::normalize_rows(const nn::MatD& chunk) const {
  nn::MatD out(chunk.rows(), chunk.cols());
  for (Eigen::Index r = 0; r < chunk.rows(); ++r)
    out.row(r) = normalize(chunk.row(r).transpose()).transpose();
  return out;
}

nn::MatD ActionNormalizer::denormalize_rows(const nn::MatD& chunk) const {
  nn::MatD out(chunk.rows(), chunk.cols());
  for (Eigen::Index r = 0; r < chunk.rows(); ++r)
    out.row(r) = denormalize(chunk.row(r).transpose()).transpose();
  return out;
}

nn::MatD chunk_at(const std::vector<std::array<float, 3>>& actions, int t, int horizon) {
  require(!actions.empty() && t >= 0 && t < static_cast<int>(actions.size()),
          ErrorCode::invalid_argument, "chunk_at: offset outside episode");
  nn::MatD chunk(horizon, 3);
  for (int i = 0; i < horizon; ++i) {
    const auto& a = actions[std::min<size_t>(t + i, actions.size() - 1)];
    chunk(i, 0) = a[0];
    chunk(i, 1) = a[1];
    chunk(i, 2) = a[2];
  }
  return chunk;
}

}  // namespace glue::policy
