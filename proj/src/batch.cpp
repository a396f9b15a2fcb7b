#include "clr/batch.hpp"

#include <algorithm>
#include <stdexcept>

namespace clr {

std::int32_t positive_of(std::int32_t i, std::int32_t n_sentences) {
  if (i < 0 || i >= 2 * n_sentences) throw std::out_of_range("view index out of range");
  return i ^ 1;
}

std::vector<std::int32_t> interleaved_pairing(std::int32_t n_sentences) {
  std::vector<std::int32_t> partner(static_cast<std::size_t>(2 * n_sentences));
  for (std::int32_t i = 0; i < 2 * n_sentences; ++i)
    partner[static_cast<std::size_t>(i)] = i ^ 1;
  return partner;
}

namespace {

void pad_rows(std::vector<TokenIds>& rows, std::vector<std::int32_t>& lengths) {
  std::size_t max_len = 0;
  for (const auto& r : rows) max_len = std::max(max_len, r.size());
  lengths.clear();
  lengths.reserve(rows.size());
  for (auto& r : rows) {
    lengths.push_back(static_cast<std::int32_t>(r.size()));
    r.resize(max_len, Vocabulary::kPad);
  }
}

}  // namespace

ContrastiveBatch build_contrastive_batch(std::span<const TokenIds> sentences,
                                         std::span<const std::int64_t> source_indices,
                                         const AugmentationPipeline& pipeline,
                                         const AugmentationParams& params,
                                         std::uint64_t global_seed, std::int64_t batch_index,
                                         const CompiledLexicon* lexicon,
                                         const BatchOptions& opts) {
  if (sentences.empty()) throw std::invalid_argument("batch needs at least one sentence");
  if (opts.vocab_size <= static_cast<std::int32_t>(Vocabulary::kNumSpecials))
    throw std::invalid_argument("batch options carry no vocabulary size");

  ContrastiveBatch batch;
  batch.n_sentences = static_cast<std::int32_t>(sentences.size());
  const auto bi = static_cast<std::uint64_t>(batch_index);

  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const auto& sentence = sentences[k];
    if (sentence.empty()) throw std::invalid_argument("batch sentences must be non-empty");
    for (std::uint64_t view = 0; view < 2; ++view) {
      const auto seed = mix_seed(global_seed, stream::kAugment, bi, k, view);
      auto augmented = augment(sentence, pipeline, params, seed, lexicon);
      TokenIds row;
      row.reserve(augmented.size() + 1);
      row.push_back(Vocabulary::kCls);
      row.insert(row.end(), augmented.begin(), augmented.end());
      if (static_cast<std::int32_t>(row.size()) > opts.max_len)
        throw std::invalid_argument("augmented view exceeds max_len");
      batch.views.push_back(std::move(row));
    }

    Rng mask_rng(mix_seed(global_seed, stream::kMlmMask, bi, k));
    const auto plan = sample_mask_plan(static_cast<std::int32_t>(sentence.size()), mask_rng,
                                       opts.vocab_size, opts.mask_ratio);
    auto [masked, labels] = apply_mask(sentence, plan);
    TokenIds row;
    row.reserve(masked.size() + 1);
    row.push_back(Vocabulary::kCls);
    row.insert(row.end(), masked.begin(), masked.end());
    if (static_cast<std::int32_t>(row.size()) > opts.max_len)
      throw std::invalid_argument("sentence exceeds max_len");
    for (auto& [pos, id] : labels) ++pos;  // account for [CLS]
    batch.masked.push_back(std::move(row));
    batch.mlm_labels.push_back(std::move(labels));
    batch.source_indices.push_back(k < source_indices.size() ? source_indices[k]
                                                             : static_cast<std::int64_t>(k));
  }

  pad_rows(batch.views, batch.view_lengths);
  pad_rows(batch.masked, batch.masked_lengths);
  return batch;
}

}  // namespace clr
