#pragma once

#include <utility>
#include <vector>

#include "glue/nn/linear.hpp"
#include "glue/nn/positional.hpp"

namespace glue::nn {

struct FusionConfig {
  int d_model = 768;
  int n_heads = 8;
  int d_out = 256;
  int query_grid = 14;  // global patches form a query_grid^2 set
  int local_grid = 28;  // local coordinates live on this grid
  double pe_scale = 1.0;
};

// Cross-attention distillation: global patch features (queries) attend over
// key-patch features (keys/values); per-position projection then mean pooling
// produces the fine-grained local feature.
template <typename S>
class FusionModule {
 public:
  explicit FusionModule(const FusionConfig& cfg = {}) : cfg_(cfg) {
    require(cfg.d_model % cfg.n_heads == 0, ErrorCode::invalid_argument,
            "fusion: head count must divide attention width");
    wq_.resize(cfg.d_model, cfg.d_model);
    wk_.resize(cfg.d_model, cfg.d_model);
    wv_.resize(cfg.d_model, cfg.d_model);
    wo_.resize(cfg.d_model, cfg.d_model);
    proj_.resize(cfg.d_model, cfg.d_out);
    pe_query_ = grid_pe_table<S>(cfg.query_grid, cfg.d_model, cfg.pe_scale);
  }

  const FusionConfig& config() const { return cfg_; }

  void init(Rng& rng) {
    wq_.init(rng);
    wk_.init(rng);
    wv_.init(rng);
    wo_.init(rng);
    proj_.init(rng);
  }

  ParamList<S> params() {
    ParamList<S> out;
    wq_.register_params(out, "fusion.wq");
    wk_.register_params(out, "fusion.wk");
    wv_.register_params(out, "fusion.wv");
    wo_.register_params(out, "fusion.wo");
    proj_.register_params(out, "fusion.proj");
    return out;
  }

  MatX<S> local_pe_rows(const std::vector<std::pair<int, int>>& coords) const {
    return pe_rows_for_coords<S>(coords, cfg_.d_model, cfg_.pe_scale);
  }

  struct Cache {
    int batch = 0, n_q = 0, n_kv = 0;
    MatX<S> gq, lk;          // PE-augmented inputs, stacked
    MatX<S> q, k, v, o, ot;  // projections, concatenated heads, attention out
    std::vector<MatX<S>> attn;  // per (sample, head) softmax weights
  };

  // Stacked batch forward: g is (batch*n_q x d), l and pe_local are
  // (batch*n_kv x d). Returns one pooled feature row per sample.
  MatX<S> forward_batch(const MatX<S>& g, const MatX<S>& l, const MatX<S>& pe_local, int batch,
                        Cache& cache) const {
    const int n_q = static_cast<int>(g.rows()) / std::max(batch, 1);
    const int n_kv = static_cast<int>(l.rows()) / std::max(batch, 1);
    require(batch > 0 && n_q * batch == g.rows() && n_kv * batch == l.rows() && n_kv >= 1,
            ErrorCode::dimension_mismatch, "fusion: bad stacked shapes");
    require(g.cols() == cfg_.d_model && l.cols() == cfg_.d_model, ErrorCode::dimension_mismatch,
            "fusion: feature width mismatch");
    require(n_q == cfg_.query_grid * cfg_.query_grid, ErrorCode::dimension_mismatch,
            "fusion: query count must equal query grid size");

    cache.batch = batch;
    cache.n_q = n_q;
    cache.n_kv = n_kv;
    cache.gq = g;
    for (int b = 0; b < batch; ++b) cache.gq.middleRows(b * n_q, n_q) += pe_query_;
    cache.lk = l + pe_local;

    cache.q = wq_.forward(cache.gq);
    cache.k = wk_.forward(cache.lk);
    cache.v = wv_.forward(cache.lk);

    const int dh = cfg_.d_model / cfg_.n_heads;
    const S inv_sqrt = static_cast<S>(1.0 / std::sqrt(static_cast<double>(dh)));
    cache.o.setZero(batch * n_q, cfg_.d_model);
    cache.attn.assign(static_cast<size_t>(batch) * cfg_.n_heads, MatX<S>());
    for (int b = 0; b < batch; ++b) {
      for (int h = 0; h < cfg_.n_heads; ++h) {
        auto qh = cache.q.block(b * n_q, h * dh, n_q, dh);
        auto kh = cache.k.block(b * n_kv, h * dh, n_kv, dh);
        auto vh = cache.v.block(b * n_kv, h * dh, n_kv, dh);
        MatX<S> scores = qh * kh.transpose() * inv_sqrt;
        for (int r = 0; r < n_q; ++r) {
          auto row = scores.row(r);
          const S m = row.maxCoeff();
          row = (row.array() - m).exp();
          row /= row.sum();
        }
        cache.o.block(b * n_q, h * dh, n_q, dh).noalias() = scores * vh;
        cache.attn[static_cast<size_t>(b) * cfg_.n_heads + h] = std::move(scores);
      }
    }
    cache.ot = wo_.forward(cache.o);
    MatX<S> proj = proj_.forward(cache.ot);  // (batch*n_q x d_out)
    MatX<S> pooled(batch, cfg_.d_out);
    const S inv_nq = static_cast<S>(1.0 / n_q);
    for (int b = 0; b < batch; ++b)
      pooled.row(b) = proj.middleRows(b * n_q, n_q).colwise().sum() * inv_nq;
    return pooled;
  }

  // d_pooled is (batch x d_out). Accumulates parameter grads; optionally
  // returns grads w.r.t. the stacked global and local inputs.
  void backward_batch(const MatX<S>& d_pooled, Cache& cache, MatX<S>* d_global,
                      MatX<S>* d_local) {
    const int batch = cache.batch, n_q = cache.n_q, n_kv = cache.n_kv;
    const S inv_nq = static_cast<S>(1.0 / n_q);
    MatX<S> d_proj(batch * n_q, cfg_.d_out);
    for (int b = 0; b < batch; ++b)
      d_proj.middleRows(b * n_q, n_q) = (d_pooled.row(b) * inv_nq).replicate(n_q, 1);

    MatX<S> d_ot = proj_.backward(cache.ot, d_proj);
    MatX<S> d_o = wo_.backward(cache.o, d_ot);

    const int dh = cfg_.d_model / cfg_.n_heads;
    const S inv_sqrt = static_cast<S>(1.0 / std::sqrt(static_cast<double>(dh)));
    MatX<S> d_q(batch * n_q, cfg_.d_model), d_k(batch * n_kv, cfg_.d_model),
        d_v(batch * n_kv, cfg_.d_model);
    for (int b = 0; b < batch; ++b) {
      for (int h = 0; h < cfg_.n_heads; ++h) {
        const MatX<S>& a = cache.attn[static_cast<size_t>(b) * cfg_.n_heads + h];
        auto kh = cache.k.block(b * n_kv, h * dh, n_kv, dh);
        auto vh = cache.v.block(b * n_kv, h * dh, n_kv, dh);
        auto qh = cache.q.block(b * n_q, h * dh, n_q, dh);
        auto d_oh = d_o.block(b * n_q, h * dh, n_q, dh);

        MatX<S> d_a = d_oh * vh.transpose();
        d_v.block(b * n_kv, h * dh, n_kv, dh).noalias() = a.transpose() * d_oh;
        // softmax rows: ds = a .* (da - rowsum(da .* a))
        MatX<S> d_s = d_a;
        for (int r = 0; r < n_q; ++r) {
          const S dot = d_a.row(r).cwiseProduct(a.row(r)).sum();
          d_s.row(r) = a.row(r).cwiseProduct((d_a.row(r).array() - dot).matrix());
        }
        d_s *= inv_sqrt;
        d_q.block(b * n_q, h * dh, n_q, dh).noalias() = d_s * kh;
        d_k.block(b * n_kv, h * dh, n_kv, dh).noalias() = d_s.transpose() * qh;
      }
    }
    MatX<S> d_gq = wq_.backward(cache.gq, d_q);
    MatX<S> d_lk = wk_.backward(cache.lk, d_k);
    d_lk += wv_.backward(cache.lk, d_v);
    if (d_global) *d_global = std::move(d_gq);
    if (d_local) *d_local = std::move(d_lk);
  }

  // Single-instance evaluation: global patches (n_q x d), local rows
  // (n_kv x d) plus their grid coordinates.
  VecX<S> fuse(const MatX<S>& global_patches, const MatX<S>& local_rows,
               const std::vector<std::pair<int, int>>& coords) const {
    require(static_cast<Eigen::Index>(coords.size()) == local_rows.rows(),
            ErrorCode::dimension_mismatch, "fusion: one coordinate pair per local row");
    require(local_rows.rows() >= 1, ErrorCode::dimension_mismatch, "fusion: needs >= 1 local row");
    Cache cache;
    MatX<S> pooled =
        forward_batch(global_patches, local_rows, local_pe_rows(coords), 1, cache);
    return pooled.row(0).transpose();
  }

 private:
  FusionConfig cfg_;
  Linear<S> wq_, wk_, wv_, wo_, proj_;
  MatX<S> pe_query_;
};

}  // namespace glue::nn
