#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clr/augment/plan.hpp"

namespace clr {

// Every maximal run of consecutive [DEL] tokens becomes a single [DEL].
TokenIds collapse_dels(TokenIds tokens);

// Replaces each selected token with [DEL], then collapses consecutive [DEL]s.
// Surviving tokens keep their relative order.
TokenIds apply_word_deletion(const TokenIds& tokens, const std::vector<std::int32_t>& indices);

// Replaces each span with a single [DEL]; adjacent results collapse as above.
TokenIds apply_span_deletion(const TokenIds& tokens, const std::vector<Span>& spans);

// Swaps each pair of spans: both spans are spliced out and each is reinserted
// at the other's original start, measured in the residual sequence; ties
// (adjacent spans) resolve by the target slot's original position. Unequal
// lengths are allowed. Output is a permutation of the input multiset. Throws
// std::invalid_argument("overlapping reorder spans") on overlap.
TokenIds apply_reorder(const TokenIds& tokens, const std::vector<std::pair<Span, Span>>& pairs);

// Replaces exactly the planned indices; length is preserved.
TokenIds apply_substitution(const TokenIds& tokens,
                            const std::vector<std::pair<std::int32_t, std::int32_t>>& choices);

TokenIds apply_plan(const TokenIds& tokens, const AugmentationPlan& plan);

// One augmented view: sample a plan from the seed and apply it.
TokenIds augment(const TokenIds& tokens, AugmentationKind kind, const AugmentationParams& params,
                 std::uint64_t seed, const CompiledLexicon* lexicon = nullptr);

// Augmentations composed left to right, e.g. "subs+del-span". Each stage gets
// its own seed derived from (seed, stage index). A final [DEL] collapse keeps
// the no-adjacent-[DEL] invariant when a reorder follows a deletion.
struct AugmentationPipeline {
  std::vector<AugmentationKind> stages;

  static AugmentationPipeline parse(const std::string& name);  // "del-word", "subs+del-span", ...
  std::string name() const;
  bool uses_lexicon() const;
  bool single_unstable() const;  // "subs" or "reorder" alone
};

TokenIds augment(const TokenIds& tokens, const AugmentationPipeline& pipeline,
                 const AugmentationParams& params, std::uint64_t seed,
                 const CompiledLexicon* lexicon = nullptr);

}  // namespace clr
