#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "clr/rng.hpp"
#include "clr/text/vocab.hpp"

namespace clr {

enum class MaskAction : std::uint8_t { Mask, RandomReplace, KeepUnchanged };

// BERT-style mask plan: max(1, floor(0.15 * len)) positions, with actions
// split 80/10/10 by largest-remainder rounding (ties resolve in the order
// Mask, RandomReplace, KeepUnchanged).
struct MaskPlan {
  std::vector<std::int32_t> selected;       // sorted
  std::vector<MaskAction> actions;          // aligned with selected
  std::vector<std::int32_t> replacements;   // aligned; meaningful for RandomReplace only
};

// Exact action counts for n selected positions under the 80/10/10 split.
struct MaskActionCounts {
  std::int32_t mask = 0, random = 0, keep = 0;
};
MaskActionCounts mask_action_counts(std::int32_t n_selected);

// Positions uniform without replacement; RandomReplace ids uniform over the
// non-special vocabulary range [5, vocab_size).
MaskPlan sample_mask_plan(std::int32_t len, Rng& rng, std::int32_t vocab_size,
                          double mask_ratio = 0.15);

// Labels map selected positions to their original ids; KeepUnchanged
// positions are labeled too. All unselected positions pass through untouched.
using MlmLabels = std::vector<std::pair<std::int32_t, std::int32_t>>;
std::pair<TokenIds, MlmLabels> apply_mask(const TokenIds& ids, const MaskPlan& plan);

}  // namespace clr
