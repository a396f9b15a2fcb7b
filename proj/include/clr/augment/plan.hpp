#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "clr/augment/lexicon.hpp"
#include "clr/rng.hpp"
#include "clr/text/vocab.hpp"

namespace clr {

enum class AugmentationKind { WordDeletion, SpanDeletion, Reordering, Substitution };

const char* to_string(AugmentationKind kind);

struct AugmentationParams {
  double delete_ratio = 0.70;     // fraction of tokens replaced by [DEL]
  std::int32_t span_count = 5;    // deletion spans per sentence
  double span_ratio = 0.05;       // span length as a fraction of sentence length
  std::int32_t reorder_pairs = 5; // span pairs swapped
  double substitute_ratio = 0.30; // fraction of tokens replaced by a synonym
  std::int32_t max_span_attempts = 100;
};

// Half-open token index range [begin, end).
struct Span {
  std::int32_t begin = 0;
  std::int32_t end = 0;
  std::int32_t length() const { return end - begin; }
  bool overlaps(const Span& o) const { return begin < o.end && o.begin < end; }
};

// A fully sampled augmentation: all randomness is spent at sampling time, so
// application is pure and golden-testable.
struct AugmentationPlan {
  AugmentationKind kind = AugmentationKind::WordDeletion;
  std::vector<std::int32_t> delete_indices;                       // sorted
  std::vector<Span> delete_spans;                                 // disjoint, sorted by begin
  std::vector<std::pair<Span, Span>> swap_pairs;                  // mutually disjoint
  std::vector<std::pair<std::int32_t, std::int32_t>> substitutions;  // (index, replacement id), sorted
};

// Samples a plan for a sentence. Substitution needs the token ids to find
// lexicon hits; the other kinds use only the length. Degenerate sentences
// yield smaller, possibly empty plans; sampling never fails.
AugmentationPlan sample_plan(AugmentationKind kind, const AugmentationParams& params,
                             const TokenIds& tokens, Rng& rng,
                             const CompiledLexicon* lexicon = nullptr);

}  // namespace clr
