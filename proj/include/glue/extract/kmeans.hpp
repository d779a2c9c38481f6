#pragma once

#include "glue/nn/tensor.hpp"

namespace glue::extract {

struct KMeansConfig {
  int max_iters = 100;
  double tol = 1e-6;  // relative center-shift tolerance
  int restarts = 8;   // k-means++ restarts; best final WCSS wins
};

struct KMeansResult {
  nn::MatD centers;             // (k x dim)
  std::vector<int> assignment;  // per point; ties go to the lowest cluster index
  double wcss = 0.0;
};

// Lloyd iterations from given initial centers; empty clusters keep their
// previous center.
KMeansResult lloyd(const nn::MatD& points, const nn::MatD& init_centers,
                   const KMeansConfig& cfg);

// Seeded k-means++ with restarts; strictly smaller final WCSS wins, first
// restart wins ties.
KMeansResult kmeans(const nn::MatD& points, int k, uint64_t seed, const KMeansConfig& cfg = {});

// Per cluster, the index of the point (over ALL points) whose feature is
// nearest the cluster center; distance ties select the smallest key.
// keys[i] orders point i (e.g. its (row, col)).
std::vector<int> select_nearest_per_cluster(const nn::MatD& points, const nn::MatD& centers,
                                            const std::vector<std::pair<int, int>>& keys);

}  // namespace glue::extract
