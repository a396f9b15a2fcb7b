#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "clr/batch.hpp"
#include "clr/model/encoder.hpp"
#include "clr/objectives.hpp"
#include "clr/optim/adam.hpp"
#include "clr/optim/schedule.hpp"

namespace clr {

template <typename S>
struct StepLosses {
  S mlm = S(0);
  S cl = S(0);
  S total = S(0);
};

// Computes the configured objective on one batch and, when `grads` is given,
// its exact reverse-mode gradient for every parameter tensor.
//
// MlmPlusCl runs three encoder passes: the 2N augmented views feed the
// contrastive loss through CLS pooling and the projection head, and the N
// masked originals feed the MLM loss through logits tied to the token
// embeddings. MlmOnly executes no contrastive forwards at all.
template <typename S>
StepLosses<S> losses_and_gradients(const ContrastiveBatch& batch, const ModelParameters<S>& params,
                                   const EncoderConfig& cfg, const LossConfig& loss_cfg,
                                   bool train_mode, Rng* drop_rng,
                                   ModelParameters<S>* grads = nullptr) {
  loss_cfg.validate();
  StepLosses<S> out;
  if (grads) grads->set_zero();
  const S tau = static_cast<S>(loss_cfg.temperature);

  if (loss_cfg.mode != LossMode::MlmOnly) {
    const auto views = PackedBatch::from_rows(batch.views, batch.view_lengths);
    ForwardCache<S> cache;
    const Mat<S> h = encoder_forward(params, cfg, views, train_mode, drop_rng,
                                     grads ? &cache : nullptr);
    const Mat<S> pooled = pool(h, views, Pooling::Cls);
    ProjectionCache<S> pcache;
    const Mat<S> z = project(params, pooled, grads ? &pcache : nullptr);
    const auto partner = interleaved_pairing(batch.n_sentences);
    Mat<S> d_z;
    out.cl = contrastive_loss(z, partner, tau, grads ? &d_z : nullptr);
    if (grads) {
      const Mat<S> d_pooled = project_backward(params, pcache, d_z, *grads);
      const Mat<S> d_h = pool_cls_backward(d_pooled, views);
      encoder_backward(params, cfg, views, cache, d_h, *grads);
    }
  }

  if (loss_cfg.mode != LossMode::ClOnly) {
    const auto masked = PackedBatch::from_rows(batch.masked, batch.masked_lengths);
    ForwardCache<S> cache;
    const Mat<S> h = encoder_forward(params, cfg, masked, train_mode, drop_rng,
                                     grads ? &cache : nullptr);

    std::vector<std::int32_t> rows;
    std::vector<std::int32_t> targets;
    for (std::int32_t s = 0; s < batch.n_sentences; ++s) {
      for (const auto& [pos, id] : batch.mlm_labels[static_cast<std::size_t>(s)]) {
        rows.push_back(masked.offset(s) + pos);
        targets.push_back(id);
      }
    }
    Mat<S> gathered(static_cast<Eigen::Index>(rows.size()), cfg.hidden);
    for (std::size_t r = 0; r < rows.size(); ++r) gathered.row(static_cast<Eigen::Index>(r)) = h.row(rows[r]);

    const Mat<S> logits = gathered * params.tok_emb.transpose();
    Mat<S> d_logits;
    out.mlm = mlm_loss(logits, targets, grads ? &d_logits : nullptr);
    if (grads) {
      grads->tok_emb += d_logits.transpose() * gathered;
      const Mat<S> d_gathered = d_logits * params.tok_emb;
      Mat<S> d_h = Mat<S>::Zero(masked.total(), cfg.hidden);
      for (std::size_t r = 0; r < rows.size(); ++r)
        d_h.row(rows[r]) += d_gathered.row(static_cast<Eigen::Index>(r));
      encoder_backward(params, cfg, masked, cache, d_h, *grads);
    }
  }

  out.total = total_loss(out.mlm, out.cl, loss_cfg.mode);
  if (!std::isfinite(static_cast<double>(out.total)))
    throw std::runtime_error("non-finite loss");
  return out;
}

struct TrainMetrics {
  std::int64_t step = 0;
  double lr = 0, mlm_loss = 0, cl_loss = 0, total_loss = 0, grad_norm = 0;
};

struct TrainerConfig {
  EncoderConfig encoder;
  LossConfig loss;
  AdamConfig adam;
  Schedule schedule;
  double clip_norm = 1.0;  // global-norm threshold; 0 disables clipping
  std::uint64_t seed = 1;
};

// Owns the parameters and optimizer state for one training run. Single
// threaded by design; batches may be prepared concurrently since they carry
// their own derived seeds.
class Trainer {
 public:
  explicit Trainer(const TrainerConfig& cfg)
      : cfg_(cfg),
        params_(ModelParameters<float>::init(cfg.encoder, cfg.seed)),
        state_(AdamState<float>::shaped(cfg.encoder)),
        grads_(ModelParameters<float>::shaped(cfg.encoder)) {
    cfg_.schedule.validate();
    cfg_.loss.validate();
  }

  Trainer(const TrainerConfig& cfg, ModelParameters<float> params, AdamState<float> state)
      : cfg_(cfg), params_(std::move(params)), state_(std::move(state)),
        grads_(ModelParameters<float>::shaped(cfg.encoder)) {}

  TrainMetrics train_step(const ContrastiveBatch& batch) {
    const std::int64_t step = state_.t + 1;
    const double lr = lr_at(std::min(step, cfg_.schedule.total_steps), cfg_.schedule);
    Rng drop_rng(mix_seed(cfg_.seed, stream::kDropout, static_cast<std::uint64_t>(step)));

    StepLosses<float> losses;
    try {
      losses = losses_and_gradients(batch, params_, cfg_.encoder, cfg_.loss,
                                    /*train_mode=*/true, &drop_rng, &grads_);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(std::string(e.what()) + " at training step " +
                               std::to_string(step));
    }

    double sq = 0;
    grads_.for_each_tensor([&](const std::string&, const Mat<float>& m, int) {
      sq += static_cast<double>(m.squaredNorm());
    });
    const double grad_norm = std::sqrt(sq);
    if (cfg_.clip_norm > 0 && grad_norm > cfg_.clip_norm) {
      const auto scale = static_cast<float>(cfg_.clip_norm / grad_norm);
      grads_.for_each_tensor([&](const std::string&, Mat<float>& m, int) { m *= scale; });
    }

    adam_step(params_, grads_, state_, lr, cfg_.adam);
    assert(params_.all_finite());

    TrainMetrics metrics;
    metrics.step = state_.t;
    metrics.lr = lr;
    metrics.mlm_loss = losses.mlm;
    metrics.cl_loss = losses.cl;
    metrics.total_loss = losses.total;
    metrics.grad_norm = grad_norm;
    return metrics;
  }

  const TrainerConfig& config() const { return cfg_; }
  const ModelParameters<float>& params() const { return params_; }
  const AdamState<float>& state() const { return state_; }

 private:
  TrainerConfig cfg_;
  ModelParameters<float> params_;
  AdamState<float> state_;
  ModelParameters<float> grads_;
};

}  // namespace clr
