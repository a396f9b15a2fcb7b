#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clr/model/config.hpp"
#include "clr/model/tensor.hpp"
#include "clr/rng.hpp"

namespace clr {

// All tensors are row-major matrices; vectors (biases, layer-norm terms) are
// 1 x dim and serialize with rank 1.
template <typename S>
struct LayerParams {
  Mat<S> ln1_g, ln1_b;
  Mat<S> wq, wk, wv, wo;      // hidden x hidden
  Mat<S> bq, bk, bv, bo;      // 1 x hidden
  Mat<S> ln2_g, ln2_b;
  Mat<S> w1;                  // hidden x ffn
  Mat<S> b1;                  // 1 x ffn
  Mat<S> w2;                  // ffn x hidden
  Mat<S> b2;                  // 1 x hidden
};

struct TensorRef;

// Encoder + projection-head weights. The MLM output head is tied to the token
// embeddings (logits = H * tok_emb^T), so there are no extra decoder tensors.
// The same struct doubles as the gradient and Adam-moment container since
// those share every shape.
template <typename S>
struct ModelParameters {
  Mat<S> tok_emb;             // vocab x hidden
  Mat<S> pos_emb;             // max_positions x hidden
  std::vector<LayerParams<S>> layers;
  Mat<S> final_ln_g, final_ln_b;
  Mat<S> proj_w1;             // hidden x hidden
  Mat<S> proj_b1;             // 1 x hidden
  Mat<S> proj_w2;             // hidden x projection_dim
  Mat<S> proj_b2;             // 1 x projection_dim

  static ModelParameters shaped(const EncoderConfig& cfg);           // zero-filled
  static ModelParameters init(const EncoderConfig& cfg, std::uint64_t seed);

  void set_zero();
  bool all_finite() const;
  std::size_t scalar_count() const;

  // Visits every tensor in a fixed order with a stable name; rank is 1 for
  // 1 x n vectors and 2 otherwise. The order is the checkpoint tensor order.
  template <typename F>
  void for_each_tensor(F&& f);
  template <typename F>
  void for_each_tensor(F&& f) const;
};

template <typename S>
ModelParameters<S> ModelParameters<S>::shaped(const EncoderConfig& cfg) {
  cfg.validate();
  ModelParameters<S> p;
  p.tok_emb = Mat<S>::Zero(cfg.vocab_size, cfg.hidden);
  p.pos_emb = Mat<S>::Zero(cfg.max_positions, cfg.hidden);
  p.layers.resize(static_cast<std::size_t>(cfg.layers));
  for (auto& l : p.layers) {
    l.ln1_g = Mat<S>::Ones(1, cfg.hidden);
    l.ln1_b = Mat<S>::Zero(1, cfg.hidden);
    l.wq = Mat<S>::Zero(cfg.hidden, cfg.hidden);
    l.wk = Mat<S>::Zero(cfg.hidden, cfg.hidden);
    l.wv = Mat<S>::Zero(cfg.hidden, cfg.hidden);
    l.wo = Mat<S>::Zero(cfg.hidden, cfg.hidden);
    l.bq = Mat<S>::Zero(1, cfg.hidden);
    l.bk = Mat<S>::Zero(1, cfg.hidden);
    l.bv = Mat<S>::Zero(1, cfg.hidden);
    l.bo = Mat<S>::Zero(1, cfg.hidden);
    l.ln2_g = Mat<S>::Ones(1, cfg.hidden);
    l.ln2_b = Mat<S>::Zero(1, cfg.hidden);
    l.w1 = Mat<S>::Zero(cfg.hidden, cfg.ffn_dim);
    l.b1 = Mat<S>::Zero(1, cfg.ffn_dim);
    l.w2 = Mat<S>::Zero(cfg.ffn_dim, cfg.hidden);
    l.b2 = Mat<S>::Zero(1, cfg.hidden);
  }
  p.final_ln_g = Mat<S>::Ones(1, cfg.hidden);
  p.final_ln_b = Mat<S>::Zero(1, cfg.hidden);
  p.proj_w1 = Mat<S>::Zero(cfg.hidden, cfg.hidden);
  p.proj_b1 = Mat<S>::Zero(1, cfg.hidden);
  p.proj_w2 = Mat<S>::Zero(cfg.hidden, cfg.projection_dim);
  p.proj_b2 = Mat<S>::Zero(1, cfg.projection_dim);
  return p;
}

template <typename S>
ModelParameters<S> ModelParameters<S>::init(const EncoderConfig& cfg, std::uint64_t seed) {
  auto p = shaped(cfg);
  Rng rng(mix_seed(seed, stream::kParamInit));
  const auto fill_normal = [&](Mat<S>& m, double std_dev) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        m(i, j) = static_cast<S>(rng.normal() * std_dev);
  };
  fill_normal(p.tok_emb, 0.02);
  fill_normal(p.pos_emb, 0.02);
  for (auto& l : p.layers) {
    fill_normal(l.wq, 0.02);
    fill_normal(l.wk, 0.02);
    fill_normal(l.wv, 0.02);
    fill_normal(l.wo, 0.02);
    fill_normal(l.w1, 0.02);
    fill_normal(l.w2, 0.02);
  }
  fill_normal(p.proj_w1, 0.02);
  fill_normal(p.proj_w2, 0.02);
  return p;
}

template <typename S>
void ModelParameters<S>::set_zero() {
  for_each_tensor([](const std::string&, Mat<S>& m, int) { m.setZero(); });
}

template <typename S>
bool ModelParameters<S>::all_finite() const {
  bool ok = true;
  for_each_tensor([&](const std::string&, const Mat<S>& m, int) {
    if (!m.allFinite()) ok = false;
  });
  return ok;
}

template <typename S>
std::size_t ModelParameters<S>::scalar_count() const {
  std::size_t n = 0;
  for_each_tensor([&](const std::string&, const Mat<S>& m, int) {
    n += static_cast<std::size_t>(m.size());
  });
  return n;
}

template <typename S>
template <typename F>
void ModelParameters<S>::for_each_tensor(F&& f) {
  f("tok_emb", tok_emb, 2);
  f("pos_emb", pos_emb, 2);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto& l = layers[i];
    const std::string prefix = "layer" + std::to_string(i) + ".";
    f(prefix + "ln1.g", l.ln1_g, 1);
    f(prefix + "ln1.b", l.ln1_b, 1);
    f(prefix + "attn.wq", l.wq, 2);
    f(prefix + "attn.bq", l.bq, 1);
    f(prefix + "attn.wk", l.wk, 2);
    f(prefix + "attn.bk", l.bk, 1);
    f(prefix + "attn.wv", l.wv, 2);
    f(prefix + "attn.bv", l.bv, 1);
    f(prefix + "attn.wo", l.wo, 2);
    f(prefix + "attn.bo", l.bo, 1);
    f(prefix + "ln2.g", l.ln2_g, 1);
    f(prefix + "ln2.b", l.ln2_b, 1);
    f(prefix + "ffn.w1", l.w1, 2);
    f(prefix + "ffn.b1", l.b1, 1);
    f(prefix + "ffn.w2", l.w2, 2);
    f(prefix + "ffn.b2", l.b2, 1);
  }
  f("final_ln.g", final_ln_g, 1);
  f("final_ln.b", final_ln_b, 1);
  f("proj.w1", proj_w1, 2);
  f("proj.b1", proj_b1, 1);
  f("proj.w2", proj_w2, 2);
  f("proj.b2", proj_b2, 1);
}

template <typename S>
template <typename F>
void ModelParameters<S>::for_each_tensor(F&& f) const {
  const_cast<ModelParameters<S>*>(this)->for_each_tensor(
      [&](const std::string& name, Mat<S>& m, int rank) {
        f(name, static_cast<const Mat<S>&>(m), rank);
      });
}

// Tensor pointers in visitation order; parallel structs zip by index.
template <typename S>
std::vector<Mat<S>*> tensor_list(ModelParameters<S>& p) {
  std::vector<Mat<S>*> out;
  p.for_each_tensor([&](const std::string&, Mat<S>& m, int) { out.push_back(&m); });
  return out;
}

}  // namespace clr
