#pragma once

#include <Eigen/Dense>

namespace clr {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

// GELU with the tanh approximation:
//   0.5 * x * (1 + tanh(sqrt(2/pi) * (x + 0.044715 * x^3)))
// The constants below are the fixed, documented approximation so outputs are
// portable across libm implementations.
inline constexpr double kGeluC0 = 0.7978845608028654;  // sqrt(2/pi)
inline constexpr double kGeluC1 = 0.044715;

template <typename S>
S gelu(S x) {
  const S c0 = static_cast<S>(kGeluC0);
  const S c1 = static_cast<S>(kGeluC1);
  const S t = std::tanh(c0 * (x + c1 * x * x * x));
  return static_cast<S>(0.5) * x * (static_cast<S>(1) + t);
}

template <typename S>
S gelu_grad(S x) {
  const S c0 = static_cast<S>(kGeluC0);
  const S c1 = static_cast<S>(kGeluC1);
  const S inner = c0 * (x + c1 * x * x * x);
  const S t = std::tanh(inner);
  const S sech2 = static_cast<S>(1) - t * t;
  const S dinner = c0 * (static_cast<S>(1) + static_cast<S>(3) * c1 * x * x);
  return static_cast<S>(0.5) * (static_cast<S>(1) + t) + static_cast<S>(0.5) * x * sech2 * dinner;
}

// Vectorized whole-matrix forms of the same functions.
template <typename S>
Mat<S> gelu_mat(const Mat<S>& x) {
  const S c0 = static_cast<S>(kGeluC0);
  const S c1 = static_cast<S>(kGeluC1);
  const auto t = (c0 * (x.array() + c1 * x.array().cube())).tanh();
  return (S(0.5) * x.array() * (S(1) + t)).matrix();
}

template <typename S>
Mat<S> gelu_grad_mat(const Mat<S>& x) {
  const S c0 = static_cast<S>(kGeluC0);
  const S c1 = static_cast<S>(kGeluC1);
  const auto t = (c0 * (x.array() + c1 * x.array().cube())).tanh();
  const auto sech2 = S(1) - t.square();
  const auto dinner = c0 * (S(1) + S(3) * c1 * x.array().square());
  return (S(0.5) * (S(1) + t) + S(0.5) * x.array() * sech2 * dinner).matrix();
}

}  // namespace clr
