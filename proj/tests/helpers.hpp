#pragma once

#include <string>
#include <vector>

#include "clr/model/tensor.hpp"
#include "clr/rng.hpp"
#include "clr/text/vocab.hpp"

namespace clr::testing {

// Random matrix with standard normal entries, deterministic per seed.
template <typename S>
Mat<S> random_mat(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Mat<S> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = static_cast<S>(rng.normal());
  return m;
}

// Sequential ids [first, first + n) standing in for Tok_1 .. Tok_N.
inline TokenIds iota_tokens(std::int32_t n, std::int32_t first = 10) {
  TokenIds ids(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = first + i;
  return ids;
}

// Tiny deterministic vocabulary: specials plus w0..w{n-1}.
inline Vocabulary tiny_vocab(std::size_t n_words = 30) {
  std::vector<std::vector<std::string>> corpus;
  std::vector<std::string> sentence;
  for (std::size_t i = 0; i < n_words; ++i) sentence.push_back("w" + std::to_string(i));
  corpus.push_back(sentence);
  return Vocabulary::build(corpus, 1, n_words + Vocabulary::kNumSpecials);
}

inline double rel_err(double a, double b) {
  const double denom = std::max({std::abs(a), std::abs(b), 1e-12});
  return std::abs(a - b) / denom;
}

}  // namespace clr::testing
