#pragma once

#include <stdexcept>

#include "clr/model/tensor.hpp"
#include "clr/objectives.hpp"

namespace clr {

// Fraction of views whose cosine nearest neighbor among the other 2N-1 rows
// is their interleaved positive partner (i XOR 1). Ties break to the lowest
// index. Invariant under per-row positive rescaling.
template <typename S>
double retrieval_accuracy(const Mat<S>& z) {
  const auto n = z.rows();
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("retrieval needs an even batch of at least 4 views");
  Eigen::Matrix<S, Eigen::Dynamic, 1> norms;
  const Mat<S> u = detail::normalize_rows(z, norms);
  const Mat<S> sim = u * u.transpose();
  std::int64_t hits = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = -1;
    S best_sim = S(0);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == i) continue;
      if (best < 0 || sim(i, k) > best_sim) {
        best = k;
        best_sim = sim(i, k);
      }
    }
    if (best == (i ^ 1)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

// Mean cosine over positive pairs minus mean cosine over all negative pairs.
template <typename S>
double positive_negative_margin(const Mat<S>& z) {
  const auto n = z.rows();
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("margin needs an even batch of at least 4 views");
  Eigen::Matrix<S, Eigen::Dynamic, 1> norms;
  const Mat<S> u = detail::normalize_rows(z, norms);
  const Mat<S> sim = u * u.transpose();
  double pos = 0, neg = 0;
  std::int64_t n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = i + 1; k < n; ++k) {
      if (k == (i ^ 1)) {
        pos += sim(i, k);
        ++n_pos;
      } else {
        neg += sim(i, k);
        ++n_neg;
      }
    }
  }
  return pos / static_cast<double>(n_pos) - neg / static_cast<double>(n_neg);
}

}  // namespace clr
