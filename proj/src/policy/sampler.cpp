#include "glue/policy/sampler.hpp"

#include <cmath>

namespace glue::policy {

std::vector<int> sampling_steps(int K, int K_infer) {
  require(K_infer >= 1 && K_infer <= K, ErrorCode::invalid_argument,
          "sampling_steps: need 1 <= K_infer <= K");
  std::vector<int> steps;
  steps.reserve(K_infer);
  for (int j = K_infer; j >= 1; --j) {
    const int k = static_cast<int>(std::llround(static_cast<double>(j) * K / K_infer));
    if (steps.empty() || steps.back() != k) steps.push_back(std::max(1, k));
  }
  return steps;
}

}  // namespace glue::policy
