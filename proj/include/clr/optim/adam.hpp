#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "clr/model/params.hpp"

namespace clr {

enum class WeightDecayStyle { Decoupled, L2 };

const char* to_string(WeightDecayStyle style);
WeightDecayStyle wd_style_from_string(const std::string& name);  // "decoupled", "l2"

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-6;
  double weight_decay = 0.01;
  WeightDecayStyle wd_style = WeightDecayStyle::Decoupled;
};

template <typename S>
struct AdamState {
  ModelParameters<S> m, v;
  std::int64_t t = 0;

  static AdamState shaped(const EncoderConfig& cfg) {
    AdamState st;
    st.m = ModelParameters<S>::shaped(cfg);
    st.m.set_zero();
    st.v = ModelParameters<S>::shaped(cfg);
    st.v.set_zero();
    return st;
  }
};

// Bias-corrected Adam update on one flat tensor; `t` is the step counter
// after incrementing. Weight decay: Decoupled shrinks the parameter by
// lr * wd before the moment update; L2 folds wd * p into the gradient.
template <typename S>
void adam_update(std::span<S> param, std::span<const S> grad, std::span<S> m, std::span<S> v,
                 std::int64_t t, double lr, const AdamConfig& cfg) {
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < param.size(); ++i) {
    double g = static_cast<double>(grad[i]);
    if (cfg.wd_style == WeightDecayStyle::L2 && cfg.weight_decay != 0.0)
      g += cfg.weight_decay * static_cast<double>(param[i]);
    else if (cfg.wd_style == WeightDecayStyle::Decoupled && cfg.weight_decay != 0.0)
      param[i] -= static_cast<S>(lr * cfg.weight_decay * static_cast<double>(param[i]));
    const double mi = cfg.beta1 * static_cast<double>(m[i]) + (1.0 - cfg.beta1) * g;
    const double vi = cfg.beta2 * static_cast<double>(v[i]) + (1.0 - cfg.beta2) * g * g;
    m[i] = static_cast<S>(mi);
    v[i] = static_cast<S>(vi);
    const double m_hat = mi / bc1;
    const double v_hat = vi / bc2;
    param[i] -= static_cast<S>(lr * m_hat / (std::sqrt(v_hat) + cfg.eps));
  }
}

// One optimizer step over every model tensor. Throws on a non-finite
// gradient before touching any state, so a failed step leaves the model
// unchanged.
template <typename S>
void adam_step(ModelParameters<S>& params, const ModelParameters<S>& grads, AdamState<S>& state,
               double lr, const AdamConfig& cfg) {
  if (lr < 0.0) throw std::invalid_argument("negative learning rate");
  if (!grads.all_finite()) throw std::runtime_error("non-finite gradient");
  ++state.t;
  const auto t = state.t;
  // All four structs visit tensors in the same fixed order.
  const auto ps = tensor_list(params);
  const auto gs = tensor_list(const_cast<ModelParameters<S>&>(grads));
  const auto ms = tensor_list(state.m);
  const auto vs = tensor_list(state.v);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    adam_update<S>({ps[i]->data(), static_cast<std::size_t>(ps[i]->size())},
                   {gs[i]->data(), static_cast<std::size_t>(gs[i]->size())},
                   {ms[i]->data(), static_cast<std::size_t>(ms[i]->size())},
                   {vs[i]->data(), static_cast<std::size_t>(vs[i]->size())}, t, lr, cfg);
  }
}

}  // namespace clr
