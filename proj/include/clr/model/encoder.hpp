#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "clr/model/config.hpp"
#include "clr/model/params.hpp"
#include "clr/model/tensor.hpp"
#include "clr/rng.hpp"
#include "clr/text/vocab.hpp"

namespace clr {

inline constexpr double kLayerNormEps = 1e-5;

// Sequences stored back to back with no padding rows; sequence s occupies
// rows [offsets[s], offsets[s+1]) of every activation matrix. Attention is
// computed per sequence, so [PAD] positions never enter the math at all.
struct PackedBatch {
  std::vector<std::int32_t> ids;
  std::vector<std::int32_t> offsets;  // size n_seqs + 1

  std::int32_t n_seqs() const { return static_cast<std::int32_t>(offsets.size()) - 1; }
  std::int32_t total() const { return offsets.back(); }
  std::int32_t len(std::int32_t s) const {
    return offsets[static_cast<std::size_t>(s) + 1] - offsets[static_cast<std::size_t>(s)];
  }
  std::int32_t offset(std::int32_t s) const { return offsets[static_cast<std::size_t>(s)]; }

  // Rows may carry [PAD] suffixes; `lengths` gives the true lengths.
  static PackedBatch from_rows(const std::vector<TokenIds>& rows,
                               const std::vector<std::int32_t>& lengths) {
    PackedBatch pb;
    pb.offsets.push_back(0);
    for (std::size_t s = 0; s < rows.size(); ++s) {
      const auto n = static_cast<std::size_t>(lengths[s]);
      if (n == 0 || n > rows[s].size())
        throw std::invalid_argument("sequence length inconsistent with row");
      pb.ids.insert(pb.ids.end(), rows[s].begin(), rows[s].begin() + static_cast<std::ptrdiff_t>(n));
      pb.offsets.push_back(static_cast<std::int32_t>(pb.ids.size()));
    }
    return pb;
  }

  static PackedBatch from_rows(const std::vector<TokenIds>& rows) {
    std::vector<std::int32_t> lengths;
    lengths.reserve(rows.size());
    for (const auto& r : rows) lengths.push_back(static_cast<std::int32_t>(r.size()));
    return from_rows(rows, lengths);
  }
};

template <typename S>
using ColVec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
struct LayerCache {
  Mat<S> xhat1;
  ColVec<S> inv_std1;
  Mat<S> q, k, v;
  std::vector<Mat<S>> probs;      // per seq: (heads * L) x L, heads stacked
  std::vector<Mat<S>> prob_mask;  // scaled dropout masks; empty when inactive
  Mat<S> ctx;
  Mat<S> attn_drop;               // empty when inactive
  Mat<S> x_mid;
  Mat<S> xhat2;
  ColVec<S> inv_std2;
  Mat<S> u;                       // FFN pre-activation
  Mat<S> ffn_drop;                // empty when inactive
};

template <typename S>
struct ForwardCache {
  Mat<S> emb_drop;  // empty when inactive
  Mat<S> x0;        // input to the first block
  std::vector<LayerCache<S>> layers;
  Mat<S> xhat_final;
  ColVec<S> inv_std_final;
};

namespace detail {

template <typename S>
void layer_norm_forward(const Mat<S>& x, const Mat<S>& gain, const Mat<S>& bias, Mat<S>& out,
                        Mat<S>& xhat, ColVec<S>& inv_std) {
  const auto d = static_cast<S>(x.cols());
  xhat.resize(x.rows(), x.cols());
  inv_std.resize(x.rows());
  out.resize(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const S mu = x.row(r).mean();
    const S var = (x.row(r).array() - mu).square().sum() / d;
    const S rstd = S(1) / std::sqrt(var + static_cast<S>(kLayerNormEps));
    inv_std(r) = rstd;
    xhat.row(r) = ((x.row(r).array() - mu) * rstd).matrix();
    out.row(r) = xhat.row(r).cwiseProduct(gain.row(0)) + bias.row(0);
  }
}

// Returns dx; accumulates dgain/dbias.
template <typename S>
Mat<S> layer_norm_backward(const Mat<S>& dy, const Mat<S>& xhat, const ColVec<S>& inv_std,
                           const Mat<S>& gain, Mat<S>& dgain, Mat<S>& dbias) {
  const auto d = static_cast<S>(dy.cols());
  Mat<S> dx(dy.rows(), dy.cols());
  for (Eigen::Index r = 0; r < dy.rows(); ++r) {
    dgain.row(0) += dy.row(r).cwiseProduct(xhat.row(r));
    dbias.row(0) += dy.row(r);
    const RowVec<S> dxhat = dy.row(r).cwiseProduct(gain.row(0));
    const S m1 = dxhat.sum() / d;
    const S m2 = dxhat.cwiseProduct(xhat.row(r)).sum() / d;
    dx.row(r) = (((dxhat.array() - m1) - xhat.row(r).array() * m2) * inv_std(r)).matrix();
  }
  return dx;
}

template <typename S>
Mat<S> dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
  Mat<S> mask(rows, cols);
  const S keep_scale = static_cast<S>(1.0 / (1.0 - p));
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      mask(r, c) = rng.unit() >= p ? keep_scale : S(0);
  return mask;
}

template <typename S>
void softmax_rows(Eigen::Ref<Mat<S>> m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const S mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp().matrix();
    m.row(r) /= m.row(r).sum();
  }
}

}  // namespace detail

// Transformer encoder forward pass over a packed batch. Pre-norm blocks with
// a final layer norm; dropout (embeddings, attention probabilities, attention
// output, FFN output) is active only in train mode and requires an rng.
// Returns H, one row per non-pad token.
template <typename S>
Mat<S> encoder_forward(const ModelParameters<S>& p, const EncoderConfig& cfg,
                       const PackedBatch& batch, bool train_mode = false, Rng* drop_rng = nullptr,
                       ForwardCache<S>* cache = nullptr) {
  const auto T = batch.total();
  const auto h = cfg.hidden;
  const auto dh = cfg.head_dim();
  const S scale = S(1) / std::sqrt(static_cast<S>(dh));
  const bool drop = train_mode && cfg.dropout > 0.0;
  if (drop && drop_rng == nullptr)
    throw std::invalid_argument("train-mode forward with dropout needs an rng");

  for (std::int32_t s = 0; s < batch.n_seqs(); ++s)
    if (batch.len(s) > cfg.max_positions)
      throw std::invalid_argument("sequence exceeds max_positions");

  Mat<S> x(T, h);
  for (std::int32_t s = 0; s < batch.n_seqs(); ++s) {
    const auto off = batch.offset(s);
    for (std::int32_t t = 0; t < batch.len(s); ++t) {
      const auto id = batch.ids[static_cast<std::size_t>(off + t)];
      if (id < 0 || id >= cfg.vocab_size) throw std::invalid_argument("token id out of range");
      x.row(off + t) = p.tok_emb.row(id) + p.pos_emb.row(t);
    }
  }
  if (drop) {
    Mat<S> mask = detail::dropout_mask<S>(T, h, cfg.dropout, *drop_rng);
    x = x.cwiseProduct(mask);
    if (cache) cache->emb_drop = std::move(mask);
  }
  if (cache) {
    cache->x0 = x;
    cache->layers.assign(static_cast<std::size_t>(cfg.layers), LayerCache<S>{});
  }

  for (std::int32_t li = 0; li < cfg.layers; ++li) {
    const auto& lp = p.layers[static_cast<std::size_t>(li)];
    LayerCache<S>* lc = cache ? &cache->layers[static_cast<std::size_t>(li)] : nullptr;
    Mat<S> xhat1, a;
    ColVec<S> inv_std1;
    detail::layer_norm_forward(x, lp.ln1_g, lp.ln1_b, a, xhat1, inv_std1);

    Mat<S> q = (a * lp.wq).rowwise() + lp.bq.row(0);
    Mat<S> k = (a * lp.wk).rowwise() + lp.bk.row(0);
    Mat<S> v = (a * lp.wv).rowwise() + lp.bv.row(0);

    Mat<S> ctx(T, h);
    std::vector<Mat<S>> probs_all, mask_all;
    if (lc) probs_all.resize(static_cast<std::size_t>(batch.n_seqs()));
    if (lc && drop) mask_all.resize(static_cast<std::size_t>(batch.n_seqs()));
    for (std::int32_t s = 0; s < batch.n_seqs(); ++s) {
      const auto off = batch.offset(s);
      const auto L = batch.len(s);
      Mat<S> seq_probs;
      if (lc) seq_probs.resize(static_cast<Eigen::Index>(cfg.heads) * L, L);
      Mat<S> seq_mask;
      if (lc && drop) seq_mask.resize(static_cast<Eigen::Index>(cfg.heads) * L, L);
      for (std::int32_t head = 0; head < cfg.heads; ++head) {
        const auto c0 = head * dh;
        Mat<S> scores = q.block(off, c0, L, dh) * k.block(off, c0, L, dh).transpose() * scale;
        detail::softmax_rows<S>(scores);
        if (lc) seq_probs.block(head * L, 0, L, L) = scores;
        if (drop) {
          Mat<S> m = detail::dropout_mask<S>(L, L, cfg.dropout, *drop_rng);
          scores = scores.cwiseProduct(m);
          if (lc) seq_mask.block(head * L, 0, L, L) = m;
        }
        ctx.block(off, c0, L, dh) = scores * v.block(off, c0, L, dh);
      }
      if (lc) probs_all[static_cast<std::size_t>(s)] = std::move(seq_probs);
      if (lc && drop) mask_all[static_cast<std::size_t>(s)] = std::move(seq_mask);
    }

    Mat<S> attn_out = (ctx * lp.wo).rowwise() + lp.bo.row(0);
    Mat<S> attn_mask;
    if (drop) {
      attn_mask = detail::dropout_mask<S>(T, h, cfg.dropout, *drop_rng);
      attn_out = attn_out.cwiseProduct(attn_mask);
    }
    Mat<S> x_mid = x + attn_out;

    Mat<S> xhat2, f;
    ColVec<S> inv_std2;
    detail::layer_norm_forward(x_mid, lp.ln2_g, lp.ln2_b, f, xhat2, inv_std2);
    Mat<S> u = (f * lp.w1).rowwise() + lp.b1.row(0);
    Mat<S> g = gelu_mat(u);
    Mat<S> ffn_out = (g * lp.w2).rowwise() + lp.b2.row(0);
    Mat<S> ffn_mask;
    if (drop) {
      ffn_mask = detail::dropout_mask<S>(T, h, cfg.dropout, *drop_rng);
      ffn_out = ffn_out.cwiseProduct(ffn_mask);
    }
    Mat<S> x_out = x_mid + ffn_out;

    if (lc) {
      lc->xhat1 = std::move(xhat1);
      lc->inv_std1 = std::move(inv_std1);
      lc->q = std::move(q);
      lc->k = std::move(k);
      lc->v = std::move(v);
      lc->probs = std::move(probs_all);
      lc->prob_mask = std::move(mask_all);
      lc->ctx = std::move(ctx);
      lc->attn_drop = std::move(attn_mask);
      lc->x_mid = std::move(x_mid);
      lc->xhat2 = std::move(xhat2);
      lc->inv_std2 = std::move(inv_std2);
      lc->u = std::move(u);
      lc->ffn_drop = std::move(ffn_mask);
    }
    x = std::move(x_out);
  }

  Mat<S> H, xhat_final;
  ColVec<S> inv_std_final;
  detail::layer_norm_forward(x, p.final_ln_g, p.final_ln_b, H, xhat_final, inv_std_final);
  if (cache) {
    cache->xhat_final = std::move(xhat_final);
    cache->inv_std_final = std::move(inv_std_final);
  }
  return H;
}

// Reverse pass. dH has one row per packed token; gradients accumulate into
// `grads` (same shapes as the parameters), which the caller zeroes.
template <typename S>
void encoder_backward(const ModelParameters<S>& p, const EncoderConfig& cfg,
                      const PackedBatch& batch, const ForwardCache<S>& cache, const Mat<S>& dH,
                      ModelParameters<S>& grads) {
  const auto T = batch.total();
  const auto h = cfg.hidden;
  const auto dh = cfg.head_dim();
  const S scale = S(1) / std::sqrt(static_cast<S>(dh));

  Mat<S> dx = detail::layer_norm_backward(dH, cache.xhat_final, cache.inv_std_final, p.final_ln_g,
                                          grads.final_ln_g, grads.final_ln_b);

  for (std::int32_t li = cfg.layers - 1; li >= 0; --li) {
    const auto& lp = p.layers[static_cast<std::size_t>(li)];
    auto& lg = grads.layers[static_cast<std::size_t>(li)];
    const auto& lc = cache.layers[static_cast<std::size_t>(li)];

    // FFN branch.
    Mat<S> d_ffn = dx;  // gradient of x_out flowing into the FFN output
    if (lc.ffn_drop.size() > 0) d_ffn = d_ffn.cwiseProduct(lc.ffn_drop);
    Mat<S> g = gelu_mat(lc.u);
    lg.b2.row(0) += d_ffn.colwise().sum();
    lg.w2 += g.transpose() * d_ffn;
    Mat<S> dg = d_ffn * lp.w2.transpose();
    Mat<S> du = dg.cwiseProduct(gelu_grad_mat(lc.u));
    Mat<S> f(T, h);
    for (Eigen::Index r = 0; r < T; ++r)
      f.row(r) = lc.xhat2.row(r).cwiseProduct(lp.ln2_g.row(0)) + lp.ln2_b.row(0);
    lg.b1.row(0) += du.colwise().sum();
    lg.w1 += f.transpose() * du;
    Mat<S> df = du * lp.w1.transpose();
    Mat<S> dx_mid =
        dx + detail::layer_norm_backward(df, lc.xhat2, lc.inv_std2, lp.ln2_g, lg.ln2_g, lg.ln2_b);

    // Attention branch.
    Mat<S> d_attn = dx_mid;
    if (lc.attn_drop.size() > 0) d_attn = d_attn.cwiseProduct(lc.attn_drop);
    lg.bo.row(0) += d_attn.colwise().sum();
    lg.wo += lc.ctx.transpose() * d_attn;
    Mat<S> dctx = d_attn * lp.wo.transpose();

    Mat<S> dq = Mat<S>::Zero(T, h), dk = Mat<S>::Zero(T, h), dv = Mat<S>::Zero(T, h);
    for (std::int32_t s = 0; s < batch.n_seqs(); ++s) {
      const auto off = batch.offset(s);
      const auto L = batch.len(s);
      const auto& seq_probs = lc.probs[static_cast<std::size_t>(s)];
      const bool dropped = !lc.prob_mask.empty();
      for (std::int32_t head = 0; head < cfg.heads; ++head) {
        const auto c0 = head * dh;
        const auto probs = seq_probs.block(head * L, 0, L, L);
        Mat<S> dprobs = dctx.block(off, c0, L, dh) * lc.v.block(off, c0, L, dh).transpose();
        if (dropped) {
          const auto m = lc.prob_mask[static_cast<std::size_t>(s)].block(head * L, 0, L, L);
          dv.block(off, c0, L, dh) +=
              probs.cwiseProduct(m).transpose() * dctx.block(off, c0, L, dh);
          dprobs = dprobs.cwiseProduct(m);
        } else {
          dv.block(off, c0, L, dh) += probs.transpose() * dctx.block(off, c0, L, dh);
        }
        Mat<S> dscores(L, L);
        for (Eigen::Index r = 0; r < L; ++r) {
          const S dot = dprobs.row(r).cwiseProduct(probs.row(r)).sum();
          dscores.row(r) = (probs.row(r).array() * (dprobs.row(r).array() - dot)).matrix();
        }
        dq.block(off, c0, L, dh) += dscores * lc.k.block(off, c0, L, dh) * scale;
        dk.block(off, c0, L, dh) += dscores.transpose() * lc.q.block(off, c0, L, dh) * scale;
      }
    }

    Mat<S> a(T, h);
    for (Eigen::Index r = 0; r < T; ++r)
      a.row(r) = lc.xhat1.row(r).cwiseProduct(lp.ln1_g.row(0)) + lp.ln1_b.row(0);
    lg.bq.row(0) += dq.colwise().sum();
    lg.bk.row(0) += dk.colwise().sum();
    lg.bv.row(0) += dv.colwise().sum();
    lg.wq += a.transpose() * dq;
    lg.wk += a.transpose() * dk;
    lg.wv += a.transpose() * dv;
    Mat<S> da = dq * lp.wq.transpose() + dk * lp.wk.transpose() + dv * lp.wv.transpose();
    dx = dx_mid +
         detail::layer_norm_backward(da, lc.xhat1, lc.inv_std1, lp.ln1_g, lg.ln1_g, lg.ln1_b);
  }

  if (cache.emb_drop.size() > 0) dx = dx.cwiseProduct(cache.emb_drop);
  for (std::int32_t s = 0; s < batch.n_seqs(); ++s) {
    const auto off = batch.offset(s);
    for (std::int32_t t = 0; t < batch.len(s); ++t) {
      const auto id = batch.ids[static_cast<std::size_t>(off + t)];
      grads.tok_emb.row(id) += dx.row(off + t);
      grads.pos_emb.row(t) += dx.row(off + t);
    }
  }
}

enum class Pooling { Cls, Mean };

inline const char* to_string(Pooling p) { return p == Pooling::Cls ? "cls" : "mean"; }

// Sentence vectors, one row per sequence. Cls takes row 0; Mean averages the
// real (non-pad) rows only.
template <typename S>
Mat<S> pool(const Mat<S>& H, const PackedBatch& batch, Pooling strategy) {
  Mat<S> out(batch.n_seqs(), H.cols());
  for (std::int32_t s = 0; s < batch.n_seqs(); ++s) {
    if (strategy == Pooling::Cls)
      out.row(s) = H.row(batch.offset(s));
    else
      out.row(s) = H.middleRows(batch.offset(s), batch.len(s)).colwise().mean();
  }
  return out;
}

// Scatters per-sequence CLS-pooling gradients back to token rows.
template <typename S>
Mat<S> pool_cls_backward(const Mat<S>& d_pooled, const PackedBatch& batch) {
  Mat<S> dH = Mat<S>::Zero(batch.total(), d_pooled.cols());
  for (std::int32_t s = 0; s < batch.n_seqs(); ++s) dH.row(batch.offset(s)) = d_pooled.row(s);
  return dH;
}

template <typename S>
struct ProjectionCache {
  Mat<S> pooled, pre;
};

// Projection head g: z = W2^T gelu(W1^T pooled + b1) + b2, one row per input.
template <typename S>
Mat<S> project(const ModelParameters<S>& p, const Mat<S>& pooled,
               ProjectionCache<S>* cache = nullptr) {
  Mat<S> pre = (pooled * p.proj_w1).rowwise() + p.proj_b1.row(0);
  Mat<S> act = gelu_mat(pre);
  Mat<S> z = (act * p.proj_w2).rowwise() + p.proj_b2.row(0);
  if (cache) {
    cache->pooled = pooled;
    cache->pre = std::move(pre);
  }
  return z;
}

// Returns d_pooled; accumulates head gradients.
template <typename S>
Mat<S> project_backward(const ModelParameters<S>& p, const ProjectionCache<S>& cache,
                        const Mat<S>& dz, ModelParameters<S>& grads) {
  Mat<S> act = gelu_mat(cache.pre);
  grads.proj_b2.row(0) += dz.colwise().sum();
  grads.proj_w2 += act.transpose() * dz;
  Mat<S> dact = dz * p.proj_w2.transpose();
  Mat<S> dpre = dact.cwiseProduct(gelu_grad_mat(cache.pre));
  grads.proj_b1.row(0) += dpre.colwise().sum();
  grads.proj_w1 += cache.pooled.transpose() * dpre;
  return dpre * p.proj_w1.transpose();
}

// Padded (n_seqs * max_len) x hidden view of packed hidden states; pad rows
// are zero. Matches the rectangular output contract used by callers that
// think in padded batches.
template <typename S>
Mat<S> unpack_padded(const Mat<S>& H, const PackedBatch& batch, std::int32_t max_len) {
  Mat<S> out = Mat<S>::Zero(static_cast<Eigen::Index>(batch.n_seqs()) * max_len, H.cols());
  for (std::int32_t s = 0; s < batch.n_seqs(); ++s)
    out.middleRows(static_cast<Eigen::Index>(s) * max_len, batch.len(s)) =
        H.middleRows(batch.offset(s), batch.len(s));
  return out;
}

}  // namespace clr
