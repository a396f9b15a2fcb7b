#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "clr/model/encoder.hpp"
#include "clr/optim/checkpoint.hpp"
#include "clr/text/vocab.hpp"

namespace clr {

// Eval-mode sentence embeddings from a trained checkpoint: tokenize, prepend
// [CLS], forward without dropout, pool. These are encoder representations
// (pooled H), not projection-head outputs. Distinct sentences are encoded
// once and cached, so duplicates cannot change results.
class Embedder {
 public:
  Embedder(CheckpointData checkpoint, Vocabulary vocab);
  static Embedder from_files(const std::string& checkpoint_path, const std::string& vocab_path);

  // One row per input sentence, in input order.
  Mat<float> embed(const std::vector<std::string>& sentences, Pooling pooling);

  std::size_t encoded_count() const { return encoded_count_; }  // distinct sentences encoded
  const EncoderConfig& config() const { return config_; }

 private:
  TokenIds prepare(const std::string& sentence) const;

  EncoderConfig config_;
  ModelParameters<float> params_;
  Vocabulary vocab_;
  std::unordered_map<std::string, RowVec<float>> cache_cls_, cache_mean_;
  std::size_t encoded_count_ = 0;
};

}  // namespace clr
