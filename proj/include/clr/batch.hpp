#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clr/augment/apply.hpp"
#include "clr/mlm.hpp"

namespace clr {

struct BatchOptions {
  std::int32_t max_len = 66;  // 64 tokens + [CLS] + slack
  double mask_ratio = 0.15;
  std::int32_t vocab_size = 0;
};

// A contrastive mini-batch: 2N augmented views in interleaved layout (views
// 2k and 2k+1 come from sentence k), each [CLS]-prefixed and padded to the
// batch maximum with [PAD], plus the N MLM-masked originals. Label positions
// account for the [CLS] shift.
struct ContrastiveBatch {
  std::int32_t n_sentences = 0;
  std::vector<TokenIds> views;             // 2N rows, padded
  std::vector<std::int32_t> view_lengths;  // true lengths incl [CLS]
  std::vector<TokenIds> masked;            // N rows, padded
  std::vector<std::int32_t> masked_lengths;
  std::vector<MlmLabels> mlm_labels;       // per sentence, positions in the padded row
  std::vector<std::int64_t> source_indices;
};

// Partner view under the interleaved pairing: i XOR 1. Throws on range error.
std::int32_t positive_of(std::int32_t i, std::int32_t n_sentences);

// Symmetric 0/1 pairing map as partner indices: partner[i] = i XOR 1.
std::vector<std::int32_t> interleaved_pairing(std::int32_t n_sentences);

// Deterministic given (sentences, seed, batch_index): view seeds derive from
// mix(seed, kAugment, batch_index, k, view) and mask seeds from
// mix(seed, kMlmMask, batch_index, k), so parallel preparation cannot change
// the schedule.
ContrastiveBatch build_contrastive_batch(std::span<const TokenIds> sentences,
                                         std::span<const std::int64_t> source_indices,
                                         const AugmentationPipeline& pipeline,
                                         const AugmentationParams& params,
                                         std::uint64_t global_seed, std::int64_t batch_index,
                                         const CompiledLexicon* lexicon,
                                         const BatchOptions& opts);

}  // namespace clr
