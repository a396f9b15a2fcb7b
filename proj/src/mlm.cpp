#include "clr/mlm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clr {

MaskActionCounts mask_action_counts(std::int32_t n_selected) {
  const double ideals[3] = {0.8 * n_selected, 0.1 * n_selected, 0.1 * n_selected};
  std::int32_t counts[3];
  double remainders[3];
  std::int32_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    counts[i] = static_cast<std::int32_t>(std::floor(ideals[i]));
    remainders[i] = ideals[i] - counts[i];
    assigned += counts[i];
  }
  // Largest remainder; ties favor the earlier action (Mask first).
  for (std::int32_t left = n_selected - assigned; left > 0; --left) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (remainders[i] > remainders[best]) best = i;
    ++counts[best];
    remainders[best] = -1.0;
  }
  return {counts[0], counts[1], counts[2]};
}

MaskPlan sample_mask_plan(std::int32_t len, Rng& rng, std::int32_t vocab_size, double mask_ratio) {
  if (len < 1) throw std::invalid_argument("cannot mask an empty sequence");
  if (vocab_size <= static_cast<std::int32_t>(Vocabulary::kNumSpecials))
    throw std::invalid_argument("vocabulary has no non-special tokens");

  const auto n = std::max<std::int32_t>(
      1, static_cast<std::int32_t>(std::floor(mask_ratio * static_cast<double>(len))));

  MaskPlan plan;
  plan.selected = rng.sample_distinct(n, len);

  const auto counts = mask_action_counts(n);
  std::vector<MaskAction> labels;
  labels.insert(labels.end(), static_cast<std::size_t>(counts.mask), MaskAction::Mask);
  labels.insert(labels.end(), static_cast<std::size_t>(counts.random), MaskAction::RandomReplace);
  labels.insert(labels.end(), static_cast<std::size_t>(counts.keep), MaskAction::KeepUnchanged);
  rng.shuffle(labels);

  plan.actions = std::move(labels);
  plan.replacements.assign(static_cast<std::size_t>(n), -1);
  const auto n_regular = static_cast<std::uint64_t>(vocab_size) - Vocabulary::kNumSpecials;
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    if (plan.actions[i] == MaskAction::RandomReplace)
      plan.replacements[i] =
          static_cast<std::int32_t>(Vocabulary::kNumSpecials + rng.below(n_regular));
  }
  return plan;
}

std::pair<TokenIds, MlmLabels> apply_mask(const TokenIds& ids, const MaskPlan& plan) {
  TokenIds masked = ids;
  MlmLabels labels;
  labels.reserve(plan.selected.size());
  for (std::size_t i = 0; i < plan.selected.size(); ++i) {
    const auto pos = plan.selected[i];
    if (pos < 0 || static_cast<std::size_t>(pos) >= ids.size())
      throw std::invalid_argument("mask plan index out of range");
    labels.emplace_back(pos, ids[static_cast<std::size_t>(pos)]);
    switch (plan.actions[i]) {
      case MaskAction::Mask:
        masked[static_cast<std::size_t>(pos)] = Vocabulary::kMask;
        break;
      case MaskAction::RandomReplace:
        masked[static_cast<std::size_t>(pos)] = plan.replacements[i];
        break;
      case MaskAction::KeepUnchanged:
        break;
    }
  }
  return {std::move(masked), std::move(labels)};
}

}  // namespace clr
