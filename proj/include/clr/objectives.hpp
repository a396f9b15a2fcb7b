#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "clr/model/tensor.hpp"

namespace clr {

enum class LossMode { MlmOnly, ClOnly, MlmPlusCl };

const char* to_string(LossMode mode);
LossMode loss_mode_from_string(const std::string& name);  // "mlm", "cl", "mlm+cl"

struct LossConfig {
  double temperature = 0.5;
  LossMode mode = LossMode::MlmPlusCl;

  void validate() const {
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  }
};

// Cosine similarity of two vectors. Throws on a zero-norm input.
template <typename S>
S cosine_sim(const RowVec<S>& u, const RowVec<S>& v) {
  const S nu = u.norm(), nv = v.norm();
  if (nu == S(0) || nv == S(0)) throw std::invalid_argument("zero-norm embedding");
  return u.dot(v) / (nu * nv);
}

namespace detail {

// Rows normalized to unit length; throws "zero-norm embedding" on any zero row.
template <typename S>
Mat<S> normalize_rows(const Mat<S>& z, Eigen::Matrix<S, Eigen::Dynamic, 1>& norms) {
  Mat<S> u(z.rows(), z.cols());
  norms.resize(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const S n = z.row(i).norm();
    if (n == S(0)) throw std::invalid_argument("zero-norm embedding");
    norms(i) = n;
    u.row(i) = z.row(i) / n;
  }
  return u;
}

}  // namespace detail

// NT-Xent loss for the ordered positive pair (i, j) over the 2N rows of Z:
//   l(i, j) = -log( exp(sim(z_i, z_j)/tau) / sum_{k != i} exp(sim(z_i, z_k)/tau) )
// computed with max-subtraction. Always >= 0; the positive term is one
// summand of the denominator.
template <typename S>
S nt_xent_pair(std::int32_t i, std::int32_t j, const Mat<S>& z, S tau) {
  const auto n = z.rows();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("nt_xent_pair needs two distinct in-range indices");
  if (!(tau > S(0))) throw std::invalid_argument("temperature must be positive");

  Eigen::Matrix<S, Eigen::Dynamic, 1> norms;
  const Mat<S> u = detail::normalize_rows(z, norms);
  Eigen::Matrix<S, Eigen::Dynamic, 1> logits(n);
  for (Eigen::Index k = 0; k < n; ++k)
    logits(k) = u.row(i).dot(u.row(k)) / tau;

  S mx = -std::numeric_limits<S>::infinity();
  for (Eigen::Index k = 0; k < n; ++k)
    if (k != i) mx = std::max(mx, logits(k));
  S denom = S(0);
  for (Eigen::Index k = 0; k < n; ++k)
    if (k != i) denom += std::exp(logits(k) - mx);
  return std::log(denom) + mx - logits(j);
}

// Overall contrastive loss: the sum of l(i, partner[i]) over all 2N rows,
// which counts each positive pair once per direction. `partner` must be a
// perfect involution with no fixed points. When d_z is given the analytic
// gradient with respect to Z is written there.
template <typename S>
S contrastive_loss(const Mat<S>& z, const std::vector<std::int32_t>& partner, S tau,
                   Mat<S>* d_z = nullptr) {
  const auto n = z.rows();
  if (!(tau > S(0))) throw std::invalid_argument("temperature must be positive");
  if (static_cast<Eigen::Index>(partner.size()) != n)
    throw std::invalid_argument("pairing size mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto j = partner[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n || j == i || partner[static_cast<std::size_t>(j)] != i)
      throw std::invalid_argument("malformed pairing");
  }

  Eigen::Matrix<S, Eigen::Dynamic, 1> norms;
  const Mat<S> u = detail::normalize_rows(z, norms);
  const Mat<S> sim = u * u.transpose();

  S loss = S(0);
  Mat<S> d_sim;
  if (d_z) d_sim = Mat<S>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto j = partner[static_cast<std::size_t>(i)];
    S mx = -std::numeric_limits<S>::infinity();
    for (Eigen::Index k = 0; k < n; ++k)
      if (k != i) mx = std::max(mx, sim(i, k) / tau);
    S denom = S(0);
    for (Eigen::Index k = 0; k < n; ++k)
      if (k != i) denom += std::exp(sim(i, k) / tau - mx);
    loss += std::log(denom) + mx - sim(i, j) / tau;
    if (d_z) {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i) continue;
        const S p = std::exp(sim(i, k) / tau - mx) / denom;
        d_sim(i, k) += (p - (k == j ? S(1) : S(0))) / tau;
      }
    }
  }

  if (d_z) {
    // sim is symmetric in u, so each entry contributes from both orientations.
    const Mat<S> g = d_sim + d_sim.transpose();
    Mat<S> du = g * u;
    d_z->resize(n, z.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      const S dot = du.row(i).dot(u.row(i));
      d_z->row(i) = (du.row(i) - dot * u.row(i)) / norms(i);
    }
  }
  return loss;
}

// Mean negative log-softmax at the true id over labeled positions. Throws
// "no masked positions" when labels are empty. When d_logits is given the
// gradient (softmax minus one-hot, averaged) is written there.
template <typename S>
S mlm_loss(const Mat<S>& logits, const std::vector<std::int32_t>& labels,
           Mat<S>* d_logits = nullptr) {
  if (labels.empty()) throw std::invalid_argument("no masked positions");
  if (static_cast<Eigen::Index>(labels.size()) != logits.rows())
    throw std::invalid_argument("one label per logit row required");

  const auto m = logits.rows();
  const auto v = logits.cols();
  if (d_logits) d_logits->resize(m, v);
  S loss = S(0);
  const S inv_m = S(1) / static_cast<S>(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto y = labels[static_cast<std::size_t>(r)];
    if (y < 0 || y >= v) throw std::invalid_argument("label outside vocabulary");
    const S mx = logits.row(r).maxCoeff();
    S denom = S(0);
    for (Eigen::Index c = 0; c < v; ++c) denom += std::exp(logits(r, c) - mx);
    loss += std::log(denom) + mx - logits(r, y);
    if (d_logits) {
      for (Eigen::Index c = 0; c < v; ++c)
        (*d_logits)(r, c) = std::exp(logits(r, c) - mx) / denom * inv_m;
      (*d_logits)(r, y) -= inv_m;
    }
  }
  return loss * inv_m;
}

// L_total = L_MLM + L_CL with unit weights; the single-objective modes pass
// the corresponding term through unchanged.
template <typename S>
S total_loss(S mlm, S cl, LossMode mode) {
  switch (mode) {
    case LossMode::MlmOnly: return mlm;
    case LossMode::ClOnly: return cl;
    case LossMode::MlmPlusCl: return mlm + cl;
  }
  throw std::logic_error("unknown loss mode");
}

}  // namespace clr
