#include "glue/extract/kmeans.hpp"

#include <limits>

namespace glue::extract {

namespace {

double sq_dist(const nn::MatD& points, Eigen::Index i, const nn::MatD& centers, Eigen::Index j) {
  return (points.row(i) - centers.row(j)).squaredNorm();
}

}  // namespace

KMeansResult lloyd(const nn::MatD& points, const nn::MatD& init_centers, const KMeansConfig& cfg) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = init_centers.rows();
  KMeansResult res;
  res.centers = init_centers;
  res.assignment.assign(static_cast<size_t>(n), 0);

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    // assignment step; ties go to the lowest cluster index (strict <)
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(points, i, res.centers, 0);
      for (Eigen::Index j = 1; j < k; ++j) {
        const double d = sq_dist(points, i, res.centers, j);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(j);
        }
      }
      res.assignment[static_cast<size_t>(i)] = best;
    }
    // update step; empty clusters keep their previous center
    nn::MatD sums = nn::MatD::Zero(k, points.cols());
    std::vector<int64_t> counts(static_cast<size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(res.assignment[static_cast<size_t>(i)]) += points.row(i);
      ++counts[static_cast<size_t>(res.assignment[static_cast<size_t>(i)])];
    }
    double max_rel_shift = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (counts[static_cast<size_t>(j)] == 0) continue;
      const nn::VecD next = (sums.row(j) / static_cast<double>(counts[static_cast<size_t>(j)]))
                                .transpose();
      const double shift = (next - res.centers.row(j).transpose()).norm();
      const double scale = std::max(1.0, res.centers.row(j).norm());
      max_rel_shift = std::max(max_rel_shift, shift / scale);
      res.centers.row(j) = next.transpose();
    }
    if (max_rel_shift <= cfg.tol) break;
  }

  // final assignment is a fixed point of the last centers
  res.wcss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = sq_dist(points, i, res.centers, 0);
    for (Eigen::Index j = 1; j < k; ++j) {
      const double d = sq_dist(points, i, res.centers, j);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    res.assignment[static_cast<size_t>(i)] = best;
    res.wcss += best_d;
  }
  return res;
}

KMeansResult kmeans(const nn::MatD& points, int k, uint64_t seed, const KMeansConfig& cfg) {
  const Eigen::Index n = points.rows();
  require(k >= 1, ErrorCode::invalid_argument, "kmeans: k >= 1");
  require(n >= k, ErrorCode::invalid_argument, "kmeans: fewer points than clusters");

  Rng rng(seed);
  KMeansResult best;
  bool have_best = false;
  const int restarts = std::max(1, cfg.restarts);
  for (int rs = 0; rs < restarts; ++rs) {
    // k-means++ seeding
    nn::MatD centers(k, points.cols());
    std::vector<double> d2(static_cast<size_t>(n), 0.0);
    const Eigen::Index first = static_cast<Eigen::Index>(rng.uniform_int(0, n - 1));
    centers.row(0) = points.row(first);
    for (int j = 1; j < k; ++j) {
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        double d = sq_dist(points, i, centers, 0);
        for (int jj = 1; jj < j; ++jj) d = std::min(d, sq_dist(points, i, centers, jj));
        d2[static_cast<size_t>(i)] = d;
        total += d;
      }
      Eigen::Index pick = 0;
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double acc = 0.0;
        pick = n - 1;
        for (Eigen::Index i = 0; i < n; ++i) {
          acc += d2[static_cast<size_t>(i)];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      }  // all-zero distances: duplicate of center 0 is as good as any
      centers.row(j) = points.row(pick);
    }
    KMeansResult res = lloyd(points, centers, cfg);
    if (!have_best || res.wcss < best.wcss) {
      best = std::move(res);
      have_best = true;
    }
  }
  return best;
}

std::vector<int> select_nearest_per_cluster(const nn::MatD& points, const nn::MatD& centers,
                                            const std::vector<std::pair<int, int>>& keys) {
  require(static_cast<Eigen::Index>(keys.size()) == points.rows(), ErrorCode::invalid_argument,
          "select_nearest_per_cluster: one key per point");
  std::vector<int> out(static_cast<size_t>(centers.rows()), -1);
  for (Eigen::Index j = 0; j < centers.rows(); ++j) {
    Eigen::Index best = 0;
    double best_d = sq_dist(points, 0, centers, j);
    for (Eigen::Index i = 1; i < points.rows(); ++i) {
      const double d = sq_dist(points, i, centers, j);
      if (d < best_d || (d == best_d && keys[static_cast<size_t>(i)] <
                                            keys[static_cast<size_t>(best)])) {
        best_d = d;
        best = i;
      }
    }
    out[static_cast<size_t>(j)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace glue::extract
